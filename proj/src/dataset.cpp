#include "mislabel/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mislabel/rng.hpp"

namespace mislabel {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) throw Error("I/O failure reading: " + path);
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw Error("I/O failure writing: " + path);
}

void Schema::validate() const {
  if (columns.empty()) throw Error("schema declares no columns");
  if (label_index >= columns.size()) throw Error("schema label out of range");
  std::unordered_set<std::string> names;
  for (const auto& col : columns) {
    if (col.name.empty()) throw Error("schema has an unnamed column");
    if (!names.insert(col.name).second)
      throw Error("duplicate column name: " + col.name);
  }
  const Column& label = columns[label_index];
  if (label.kind != ColumnKind::categorical)
    throw Error("label column '" + label.name + "' must be categorical");
  if (!label.open_categories && label.categories.size() < 2)
    throw Error("label column '" + label.name +
                "' must declare at least two categories");
  if (columns.size() < 2)
    throw Error("schema must declare at least one feature column");
}

Schema parse_schema(const std::string& text, const std::string& origin) {
  Schema schema;
  std::optional<std::string> label_name;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto toks = split_ws(raw);
    if (toks.empty()) continue;
    const auto fail = [&](const std::string& msg) {
      throw Error(origin + ":" + std::to_string(line_no) + ": " + msg);
    };
    if (toks[0] == "missing_token") {
      if (toks.size() != 2) fail("missing_token expects one value");
      schema.missing_token = toks[1];
    } else if (toks[0] == "label") {
      if (toks.size() != 2) fail("label expects one column name");
      if (label_name) fail("label declared twice");
      label_name = toks[1];
    } else if (toks[0] == "column") {
      if (toks.size() < 3) fail("column expects a name and a kind");
      Column col;
      col.name = toks[1];
      if (toks[2] == "numeric") {
        if (toks.size() > 3) fail("numeric column takes no category list");
        col.kind = ColumnKind::numeric;
      } else if (toks[2] == "categorical") {
        col.kind = ColumnKind::categorical;
        col.categories.assign(toks.begin() + 3, toks.end());
        col.open_categories = col.categories.empty();
        std::unordered_set<std::string> seen(col.categories.begin(),
                                             col.categories.end());
        if (seen.size() != col.categories.size())
          fail("duplicate category in column " + col.name);
      } else {
        fail("unknown column kind: " + toks[2]);
      }
      schema.columns.push_back(std::move(col));
    } else {
      fail("unknown schema directive: " + toks[0]);
    }
  }
  if (!label_name) throw Error(origin + ": schema declares no label column");
  bool found = false;
  for (std::size_t i = 0; i < schema.columns.size(); ++i) {
    if (schema.columns[i].name == *label_name) {
      schema.label_index = i;
      found = true;
    }
  }
  if (!found)
    throw Error(origin + ": label column '" + *label_name +
                "' is not declared");
  schema.validate();
  return schema;
}

Schema load_schema(const std::string& path) {
  return parse_schema(read_text_file(path), path);
}

std::string schema_to_string(const Schema& schema) {
  std::ostringstream out;
  out << "missing_token " << schema.missing_token << "\n";
  out << "label " << schema.label_column().name << "\n";
  for (const auto& col : schema.columns) {
    out << "column " << col.name << " "
        << (col.kind == ColumnKind::numeric ? "numeric" : "categorical");
    for (const auto& cat : col.categories) out << " " << cat;
    out << "\n";
  }
  return out.str();
}

Dataset parse_dataset(const std::string& text, Schema schema,
                      const std::string& origin) {
  // Category lookup tables; open columns grow as values appear.
  std::vector<std::unordered_map<std::string, int>> cat_index(
      schema.columns.size());
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    const auto& cats = schema.columns[c].categories;
    for (std::size_t i = 0; i < cats.size(); ++i)
      cat_index[c][cats[i]] = static_cast<int>(i);
  }

  Dataset ds;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (trim(raw).empty()) continue;
    const auto fail = [&](const std::string& msg) {
      throw Error(origin + ":" + std::to_string(line_no) + ": " + msg);
    };
    const auto cells = split_on(raw, ',');
    if (cells.size() != schema.columns.size())
      fail("expected " + std::to_string(schema.columns.size()) +
           " columns, found " + std::to_string(cells.size()));
    Instance inst;
    inst.features.resize(schema.feature_count());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      Column& col = schema.columns[c];
      const std::string cell = trim(cells[c]);
      double value;
      if (cell == schema.missing_token) {
        if (c == schema.label_index) fail("label value is missing");
        value = missing_value();
      } else if (col.kind == ColumnKind::numeric) {
        const char* first = cell.data();
        const char* last = cell.data() + cell.size();
        double parsed = 0;
        const auto res = std::from_chars(first, last, parsed);
        if (res.ec != std::errc() || res.ptr != last)
          fail("cannot parse numeric cell '" + cell + "' in column " +
               col.name);
        value = parsed;
      } else {
        auto& index = cat_index[c];
        auto it = index.find(cell);
        if (it == index.end()) {
          if (!col.open_categories)
            fail("unknown category '" + cell + "' in column " + col.name);
          const int next = static_cast<int>(col.categories.size());
          col.categories.push_back(cell);
          it = index.emplace(cell, next).first;
        }
        value = static_cast<double>(it->second);
      }
      if (c == schema.label_index) {
        inst.label = static_cast<int>(value);
      } else {
        const std::size_t f = c < schema.label_index ? c : c - 1;
        inst.features[f] = value;
      }
    }
    ds.instances.push_back(std::move(inst));
  }
  if (ds.instances.empty()) throw Error(origin + ": no instances");
  if (schema.label_column().categories.size() < 2)
    throw Error(origin + ": label column has fewer than two categories");
  ds.schema = std::move(schema);
  ds.class_count =
      static_cast<int>(ds.schema.label_column().categories.size());
  return ds;
}

Dataset load_dataset(const std::string& data_path,
                     const std::string& schema_path) {
  Schema schema = load_schema(schema_path);
  return parse_dataset(read_text_file(data_path), std::move(schema),
                       data_path);
}

std::string dataset_to_string(const Dataset& ds) {
  std::ostringstream out;
  for (const auto& inst : ds.instances) {
    for (std::size_t c = 0; c < ds.schema.columns.size(); ++c) {
      if (c > 0) out << ",";
      if (c == ds.schema.label_index) {
        out << ds.class_name(inst.label);
        continue;
      }
      const std::size_t f = c < ds.schema.label_index ? c : c - 1;
      const double v = inst.features[f];
      if (is_missing(v)) {
        out << ds.schema.missing_token;
      } else if (ds.schema.columns[c].kind == ColumnKind::numeric) {
        out << format_double(v);
      } else {
        out << ds.schema.columns[c].categories[static_cast<std::size_t>(v)];
      }
    }
    out << "\n";
  }
  return out.str();
}

void save_dataset(const Dataset& ds, const std::string& path) {
  write_text_file(path, dataset_to_string(ds));
}

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.schema = ds.schema;
  out.class_count = ds.class_count;
  out.instances.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= ds.instances.size())
      throw Error("subset index out of range: " + std::to_string(i));
    out.instances.push_back(ds.instances[i]);
  }
  return out;
}

TrainTestSplit split_train_test(const Dataset& ds, double train_fraction,
                                std::uint64_t seed) {
  if (ds.instances.empty()) throw Error("split of an empty dataset");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error("train_fraction must lie in (0, 1)");
  const std::size_t n = ds.instances.size();
  // Round half-up.
  const std::size_t train_n = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(n) + 0.5));
  if (train_n == 0 || train_n == n)
    throw Error("split leaves an empty train or test side (N=" +
                std::to_string(n) + ")");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(perm);
  TrainTestSplit split;
  split.train_indices.assign(perm.begin(), perm.begin() + train_n);
  split.test_indices.assign(perm.begin() + train_n, perm.end());
  split.train = subset(ds, split.train_indices);
  split.test = subset(ds, split.test_indices);
  return split;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t instance_count,
                                                 int n, std::uint64_t seed) {
  if (n < 2) throw Error("fold count must be at least 2");
  if (static_cast<std::size_t>(n) > instance_count)
    throw Error("fold count exceeds instance count");
  std::vector<std::size_t> perm(instance_count);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(perm);
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(n));
  const std::size_t base = instance_count / static_cast<std::size_t>(n);
  const std::size_t extra = instance_count % static_cast<std::size_t>(n);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const std::size_t len = base + (f < extra ? 1 : 0);
    folds[f].assign(perm.begin() + pos, perm.begin() + pos + len);
    pos += len;
  }
  return folds;
}

std::vector<std::size_t> class_histogram(const Dataset& ds) {
  std::vector<std::size_t> hist(static_cast<std::size_t>(ds.class_count), 0);
  for (const auto& inst : ds.instances)
    ++hist[static_cast<std::size_t>(inst.label)];
  return hist;
}

}  // namespace mislabel
