#include "mislabel/synthetic.hpp"

#include <string>

#include "mislabel/rng.hpp"

namespace mislabel {

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.class_counts.size() < 2)
    throw Error("synthetic data needs at least 2 classes");
  for (std::size_t count : spec.class_counts) {
    if (count == 0) throw Error("synthetic class counts must be positive");
  }
  if (spec.dims == 0) throw Error("synthetic data needs at least 1 dimension");
  if (!(spec.sigma > 0.0))
    throw Error("synthetic sigma must be positive (degenerate covariance)");

  Dataset ds;
  for (std::size_t d = 0; d < spec.dims; ++d) {
    ds.schema.columns.push_back(
        {"f" + std::to_string(d), ColumnKind::numeric, {}, false});
  }
  Column label;
  label.name = "class";
  label.kind = ColumnKind::categorical;
  for (std::size_t c = 0; c < spec.class_counts.size(); ++c)
    label.categories.push_back("c" + std::to_string(c));
  ds.schema.columns.push_back(std::move(label));
  ds.schema.label_index = spec.dims;
  ds.schema.validate();
  ds.class_count = static_cast<int>(spec.class_counts.size());

  // Pair groups spread along axis 0 and centered on the origin; the two
  // pair members offset along axis 1 (axis 0 when one-dimensional).
  const std::size_t groups = (spec.class_counts.size() + 1) / 2;
  for (std::size_t c = 0; c < spec.class_counts.size(); ++c) {
    const double group =
        (static_cast<double>(c / 2) -
         0.5 * static_cast<double>(groups - 1)) *
        spec.group_separation;
    const double side = (c % 2 == 0 ? -0.5 : 0.5) * spec.pair_separation;
    std::vector<double> center(spec.dims, 0.0);
    center[0] = group;
    center[spec.dims > 1 ? 1 : 0] += side;

    // Per-class substream: the class's points do not depend on how many
    // points other classes draw.
    Rng rng(seed::derive(seed, seed::kClass, c));
    for (std::size_t i = 0; i < spec.class_counts[c]; ++i) {
      Instance inst;
      inst.label = static_cast<int>(c);
      inst.features.resize(spec.dims);
      for (std::size_t d = 0; d < spec.dims; ++d)
        inst.features[d] = center[d] + spec.sigma * rng.next_gaussian();
      ds.instances.push_back(std::move(inst));
    }
  }
  return ds;
}

std::vector<std::pair<int, int>> synthetic_confusable_pairs(int class_count) {
  std::vector<std::pair<int, int>> pairs;
  for (int c = 0; c + 1 < class_count; c += 2) pairs.emplace_back(c, c + 1);
  return pairs;
}

}  // namespace mislabel
