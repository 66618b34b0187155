#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mislabel {

// All library errors are reported through this type; the message carries
// enough context (file, row, column) to locate the offending input.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

enum class ColumnKind { numeric, categorical };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  // Declared category values, in declaration order. Empty for numeric
  // columns. For categorical columns an empty list means "open": the
  // categories are collected from the data in first-appearance order.
  std::vector<std::string> categories;
  bool open_categories = false;
};

// Column layout of a delimited data file. Exactly one column is the label;
// it must be categorical and end up with at least two categories.
struct Schema {
  std::vector<Column> columns;
  std::size_t label_index = 0;
  std::string missing_token = "?";

  std::size_t feature_count() const { return columns.size() - 1; }

  // Maps feature position (0..feature_count-1) to its column index.
  std::size_t column_of_feature(std::size_t f) const {
    return f < label_index ? f : f + 1;
  }
  const Column& feature_column(std::size_t f) const {
    return columns[column_of_feature(f)];
  }
  const Column& label_column() const { return columns[label_index]; }

  void validate() const;
};

// Feature values are stored as doubles: the numeric value for numeric
// columns, the category index for categorical ones, NaN for missing.
inline double missing_value() {
  return std::numeric_limits<double>::quiet_NaN();
}
inline bool is_missing(double v) { return std::isnan(v); }

struct Instance {
  std::vector<double> features;
  int label = 0;
};

struct Dataset {
  Schema schema;
  std::vector<Instance> instances;
  int class_count = 0;

  std::size_t size() const { return instances.size(); }
  std::size_t feature_count() const { return schema.feature_count(); }
  bool feature_is_numeric(std::size_t f) const {
    return schema.feature_column(f).kind == ColumnKind::numeric;
  }
  // Number of categories of categorical feature f.
  int feature_category_count(std::size_t f) const {
    return static_cast<int>(schema.feature_column(f).categories.size());
  }
  const std::string& class_name(int label) const {
    return schema.label_column().categories[static_cast<std::size_t>(label)];
  }
};

// Schema file: one declaration per line, '#' starts a comment.
//   missing_token <token>              (optional, default "?")
//   label <column-name>                (required, must be categorical)
//   column <name> numeric
//   column <name> categorical [v ...]  (no values -> open set, collected
//                                       from data in first-appearance order)
// Tokens are whitespace-separated; columns appear in data-file order.
Schema load_schema(const std::string& path);
Schema parse_schema(const std::string& text, const std::string& origin);
std::string schema_to_string(const Schema& schema);

// Data file: comma-separated values, one instance per line, no header.
// Cells are trimmed of surrounding whitespace; a cell equal to the schema's
// missing token is a missing value. Unknown values of a closed categorical
// column are an error; open columns grow their category list.
Dataset load_dataset(const std::string& data_path,
                     const std::string& schema_path);
Dataset parse_dataset(const std::string& text, Schema schema,
                      const std::string& origin);
std::string dataset_to_string(const Dataset& ds);
void save_dataset(const Dataset& ds, const std::string& path);

// Restricts the dataset to the given instance indices (schema and class
// inventory are preserved).
Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices);

// Seeded 90/10-style split: a uniform random permutation is cut at
// round(train_fraction * N), half-up. No stratification.
struct TrainTestSplit {
  Dataset train;
  Dataset test;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};
TrainTestSplit split_train_test(const Dataset& ds, double train_fraction,
                                std::uint64_t seed);

// Seeded partition into n index sets whose sizes differ by at most one.
std::vector<std::vector<std::size_t>> make_folds(std::size_t instance_count,
                                                 int n, std::uint64_t seed);

// Per-class instance counts.
std::vector<std::size_t> class_histogram(const Dataset& ds);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mislabel
