#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "mislabel/decision_tree.hpp"
#include "mislabel/rng.hpp"
#include "test_util.hpp"

using namespace mislabel;
using testutil::numeric_dataset;
using testutil::one_feature_dataset;

namespace {

// Independent entropy-arithmetic oracle for a binary threshold split.
double oracle_gain_ratio(const std::vector<double>& values,
                         const std::vector<int>& labels, double threshold) {
  const auto entropy = [](const std::map<int, int>& counts, int total) {
    double h = 0.0;
    for (const auto& [label, count] : counts) {
      if (count == 0) continue;
      const double p = static_cast<double>(count) / total;
      h -= p * std::log2(p);
    }
    return h;
  };
  std::map<int, int> all, left, right;
  int n_left = 0, n_right = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ++all[labels[i]];
    if (values[i] > threshold) {
      ++right[labels[i]];
      ++n_right;
    } else {
      ++left[labels[i]];
      ++n_left;
    }
  }
  const int n = n_left + n_right;
  const double wl = static_cast<double>(n_left) / n;
  const double wr = static_cast<double>(n_right) / n;
  const double gain = entropy(all, n) -
                      (wl * entropy(left, n_left) + wr * entropy(right, n_right));
  const double split_info = -(wl * std::log2(wl) + wr * std::log2(wr));
  return gain / split_info;
}

std::size_t internal_nodes(const TreeNode& node) {
  if (node.is_leaf()) return 0;
  std::size_t total = 1;
  for (const auto& child : node.children) total += internal_nodes(*child);
  return total;
}

}  // namespace

TEST_CASE("gain ratio for hand-checkable splits") {
  // perfect separation of a 2/2 label split: gain = split info = 1 bit
  const auto sep = one_feature_dataset({1, 2, 3, 4}, {0, 0, 1, 1}, 2);
  auto r = gain_ratio(sep, {}, SplitCandidate{0, 2.5});
  REQUIRE(r.has_value());
  CHECK(*r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*r == doctest::Approx(oracle_gain_ratio({1, 2, 3, 4}, {0, 0, 1, 1},
                                                2.5)));

  // all labels identical: zero class entropy, zero gain
  const auto pure = one_feature_dataset({1, 2, 3, 4}, {0, 0, 0, 0}, 2);
  r = gain_ratio(pure, {}, SplitCandidate{0, 2.5});
  REQUIRE(r.has_value());
  CHECK(*r == 0.0);

  // split into {A,B} and {A,B}: branch entropies equal the prior entropy
  const auto mixed = one_feature_dataset({1, 3, 2, 4}, {0, 0, 1, 1}, 2);
  r = gain_ratio(mixed, {}, SplitCandidate{0, 2.5});
  REQUIRE(r.has_value());
  CHECK(*r == 0.0);

  // single non-empty branch is rejected, not scored
  CHECK_FALSE(gain_ratio(sep, {}, SplitCandidate{0, 99.0}).has_value());
}

TEST_CASE("gain ratio stays within [0, 1]") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng.next_below(30);
    std::vector<double> values(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = rng.next_below(8);
      labels[i] = static_cast<int>(rng.next_below(3));
    }
    const auto ds = one_feature_dataset(values, labels, 3);
    const double threshold = 0.5 + rng.next_below(7);
    const auto r = gain_ratio(ds, {}, SplitCandidate{0, threshold});
    if (r) {
      CHECK(*r >= 0.0);
      CHECK(*r <= 1.0);
    }
  }
}

TEST_CASE("best cut point picks boundary midpoints") {
  const auto four = one_feature_dataset({1, 2, 3, 4}, {0, 0, 1, 1}, 2);
  auto cut = best_cut_point(four, {}, 0);
  REQUIRE(cut.has_value());
  CHECK(cut->threshold == 2.5);

  const auto pure = one_feature_dataset({1, 2, 3}, {0, 0, 0}, 2);
  CHECK_FALSE(best_cut_point(pure, {}, 0).has_value());

  // brute force over the candidate midpoints confirms 1.5 wins
  const std::vector<double> values{1, 1, 2};
  const std::vector<int> labels{0, 1, 1};
  const auto dup = one_feature_dataset(values, labels, 2);
  cut = best_cut_point(dup, {}, 0);
  REQUIRE(cut.has_value());
  CHECK(cut->threshold == 1.5);
  CHECK(cut->score == doctest::Approx(oracle_gain_ratio(values, labels, 1.5)));
}

TEST_CASE("cut points are midpoints of adjacent distinct values") {
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng.next_below(40);
    std::vector<double> values(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = static_cast<double>(rng.next_below(12));
      labels[i] = static_cast<int>(rng.next_below(3));
    }
    const auto ds = one_feature_dataset(values, labels, 3);
    const auto cut = best_cut_point(ds, {}, 0);
    if (!cut) continue;
    std::set<double> observed(values.begin(), values.end());
    CHECK(observed.count(cut->threshold) == 0);
    const auto above = observed.upper_bound(cut->threshold);
    REQUIRE(above != observed.end());
    REQUIRE(above != observed.begin());
    const double hi = *above;
    const double lo = *std::prev(above);
    CHECK(cut->threshold == 0.5 * (lo + hi));
  }
}

TEST_CASE("pure training data grows a single leaf") {
  const auto pure = one_feature_dataset({5, 6, 7}, {1, 1, 1}, 2);
  const TreeModel model = dtree_train(pure, LearnerSpec::decision_tree());
  CHECK(model.leaf_count() == 1);
  CHECK(model.classify({{6.5}, 0}) == 1);
}

TEST_CASE("xor layout needs at least two internal tests") {
  const auto data = numeric_dataset(
      {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1, 1, 0}, 2);
  LearnerSpec spec = LearnerSpec::decision_tree();
  spec.prune = false;
  const TreeModel model = dtree_grow(data, spec);
  CHECK(internal_nodes(model.root()) >= 2);
  for (const auto& inst : data.instances)
    CHECK(model.classify(inst) == inst.label);
}

TEST_CASE("pruning never adds leaves") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 30 + rng.next_below(50);
    std::vector<std::vector<double>> rows(n, std::vector<double>(2));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      rows[i][0] = rng.next_unit();
      rows[i][1] = rng.next_unit();
      labels[i] = rows[i][0] > 0.5 ? 1 : 0;
      if (rng.next_unit() < 0.25) labels[i] = 1 - labels[i];  // label noise
    }
    const auto ds = numeric_dataset(rows, labels, 2);
    LearnerSpec spec = LearnerSpec::decision_tree();
    const TreeModel pruned = dtree_train(ds, spec);
    spec.prune = false;
    const TreeModel grown = dtree_grow(ds, spec);
    CHECK(pruned.leaf_count() <= grown.leaf_count());
  }
}

TEST_CASE("unpruned trees memorize consistent training data") {
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 20 + rng.next_below(40);
    std::vector<std::vector<double>> rows(n, std::vector<double>(2));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      rows[i][0] = rng.next_unit();  // continuous draws: no duplicates
      rows[i][1] = rng.next_unit();
      labels[i] = static_cast<int>(rng.next_below(3));
    }
    const auto ds = numeric_dataset(rows, labels, 3);
    LearnerSpec spec = LearnerSpec::decision_tree();
    spec.prune = false;
    const TreeModel model = dtree_grow(ds, spec);
    for (const auto& inst : ds.instances)
      CHECK(model.classify(inst) == inst.label);
  }
}

TEST_CASE("classification follows numeric tests and the missing rule") {
  // a tree equivalent to: feature0 > 2.5 ? c1 : c0, trained from data so
  // the branch counts are 7 on the low side and 3 on the high side
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 7; ++i) {
    rows.push_back({1.0 + 0.1 * i});
    labels.push_back(0);
  }
  for (int i = 0; i < 3; ++i) {
    rows.push_back({3.0 + 0.1 * i});
    labels.push_back(1);
  }
  const auto train = numeric_dataset(rows, labels, 2);
  const TreeModel model = dtree_train(train, LearnerSpec::decision_tree());
  REQUIRE_FALSE(model.root().is_leaf());
  CHECK(model.root().threshold > 1.6);
  CHECK(model.root().threshold < 3.0);
  CHECK(model.classify({{3.0}, 0}) == 1);
  CHECK(model.classify({{1.5}, 0}) == 0);
  // missing tested feature: larger branch (7 on the left) wins
  CHECK(model.root().branch_counts[0] == 7);
  CHECK(model.root().branch_counts[1] == 3);
  CHECK(model.classify({{missing_value()}, 0}) == 0);
}

TEST_CASE("unseen categories fall back to the missing rule") {
  Dataset ds;
  ds.schema.columns.push_back(
      {"color", ColumnKind::categorical, {"r", "g", "b"}, false});
  ds.schema.columns.push_back(
      {"y", ColumnKind::categorical, {"n", "p"}, false});
  ds.schema.label_index = 1;
  ds.class_count = 2;
  // seven red negatives, three green positives, one blue negative
  for (int i = 0; i < 7; ++i) ds.instances.push_back({{0.0}, 0});
  for (int i = 0; i < 3; ++i) ds.instances.push_back({{1.0}, 1});
  ds.instances.push_back({{2.0}, 0});
  LearnerSpec spec = LearnerSpec::decision_tree();
  spec.prune = false;
  const TreeModel model = dtree_grow(ds, spec);
  REQUIRE_FALSE(model.root().is_leaf());
  // a category index past the declared range behaves like missing: the
  // most populated branch (red, 7 instances) decides
  CHECK(model.classify({{9.0}, 0}) == 0);
  CHECK(model.classify({{missing_value()}, 0}) == 0);
  CHECK(model.classify({{1.0}, 0}) == 1);
}

TEST_CASE("leaf counting") {
  const auto pure = one_feature_dataset({1, 2}, {1, 1}, 2);
  CHECK(dtree_train(pure, LearnerSpec::decision_tree()).leaf_count() == 1);

  const auto split = one_feature_dataset({1, 1, 2, 2}, {0, 0, 1, 1}, 2);
  LearnerSpec spec = LearnerSpec::decision_tree();
  spec.prune = false;
  CHECK(dtree_grow(split, spec).leaf_count() == 2);
}

TEST_CASE("training ignores missing values when scoring splits") {
  std::vector<std::vector<double>> rows{
      {1.0}, {2.0}, {3.0}, {4.0}, {missing_value()}, {missing_value()}};
  std::vector<int> labels{0, 0, 1, 1, 0, 1};
  const auto ds = numeric_dataset(rows, labels, 2);
  LearnerSpec spec = LearnerSpec::decision_tree();
  spec.prune = false;
  const TreeModel model = dtree_grow(ds, spec);
  REQUIRE_FALSE(model.root().is_leaf());
  CHECK(model.root().threshold == 2.5);
  // the two missing-valued instances joined a branch, so branch counts sum
  // to the full node
  CHECK(model.root().branch_counts[0] + model.root().branch_counts[1] == 6);
}
