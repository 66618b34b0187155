#include "mislabel/noise.hpp"

#include <algorithm>
#include <sstream>

#include "mislabel/rng.hpp"

namespace mislabel {

void NoiseSpec::validate(int class_count) const {
  if (!(rate >= 0.0 && rate <= 1.0))
    throw Error("noise rate must lie in [0, 1]");
  for (const auto& [a, b] : pairs) {
    if (a == b) throw Error("noise pair members must differ");
    if (a < 0 || b < 0 || a >= class_count || b >= class_count)
      throw Error("noise pair class out of range: " + std::to_string(a) +
                  "-" + std::to_string(b));
  }
}

std::vector<std::vector<int>> NoiseSpec::partners(int class_count) const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(class_count));
  for (const auto& [a, b] : pairs) {
    out[static_cast<std::size_t>(a)].push_back(b);
    out[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& list : out) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return out;
}

std::pair<Dataset, CorruptionMask> inject_noise(const Dataset& train,
                                                const NoiseSpec& spec,
                                                std::uint64_t seed) {
  spec.validate(train.class_count);
  const auto partners = spec.partners(train.class_count);
  Dataset corrupted = train;
  CorruptionMask mask;
  Rng rng(seed);
  for (std::size_t t = 0; t < corrupted.size(); ++t) {
    Instance& inst = corrupted.instances[t];
    const auto& options = partners[static_cast<std::size_t>(inst.label)];
    if (options.empty()) continue;
    if (rng.next_unit() >= spec.rate) continue;
    const int partner = options.size() == 1
                            ? options.front()
                            : options[rng.next_below(options.size())];
    mask.original_label[t] = inst.label;
    inst.label = partner;
  }
  return {std::move(corrupted), std::move(mask)};
}

double actual_noise_rate(const CorruptionMask& mask, std::size_t train_size) {
  if (train_size == 0) throw Error("actual_noise_rate over an empty set");
  return static_cast<double>(mask.size()) / static_cast<double>(train_size);
}

Dataset restore_labels(const Dataset& corrupted, const CorruptionMask& mask) {
  Dataset restored = corrupted;
  for (const auto& [t, original] : mask.original_label) {
    if (t >= restored.size())
      throw Error("corruption mask index out of range: " + std::to_string(t));
    restored.instances[t].label = original;
  }
  return restored;
}

std::string CorruptionMask::to_table(const Dataset& corrupted) const {
  std::ostringstream out;
  out << "instance\toriginal\tcorrupted\n";
  for (const auto& [t, original] : original_label) {
    out << t << "\t" << corrupted.class_name(original) << "\t"
        << corrupted.class_name(corrupted.instances[t].label) << "\n";
  }
  return out.str();
}

CorruptionMask CorruptionMask::from_table(const std::string& text,
                                          const Dataset& corrupted) {
  const auto& cats = corrupted.schema.label_column().categories;
  const auto class_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < cats.size(); ++i) {
      if (cats[i] == name) return static_cast<int>(i);
    }
    throw Error("corruption mask names unknown class '" + name + "'");
  };
  CorruptionMask mask;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {  // header
      first = false;
      continue;
    }
    std::istringstream row(line);
    std::string id, original, changed;
    if (!std::getline(row, id, '\t') || !std::getline(row, original, '\t') ||
        !std::getline(row, changed, '\t'))
      throw Error("malformed corruption mask row: " + line);
    mask.original_label[std::stoul(id)] = class_index(original);
  }
  return mask;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
  std::vector<std::pair<int, int>> pairs;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos)
      throw Error("expected class pairs like 0-1,2-3; got '" + item + "'");
    pairs.emplace_back(std::stoi(item.substr(0, dash)),
                       std::stoi(item.substr(dash + 1)));
  }
  return pairs;
}

}  // namespace mislabel
