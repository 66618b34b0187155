#include "mislabel/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mislabel/stats.hpp"

namespace mislabel {

namespace {

double entropy_bits(const std::vector<std::size_t>& counts,
                    std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

std::vector<std::size_t> all_indices(const Dataset& ds) {
  std::vector<std::size_t> idx(ds.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return idx;
}

// Branch index of a known feature value under a candidate test.
std::size_t branch_of(const Dataset& ds, const SplitCandidate& test,
                      double value) {
  if (ds.feature_is_numeric(test.feature)) {
    return value > test.threshold ? 1 : 0;
  }
  return static_cast<std::size_t>(value);
}

std::size_t branch_count_of(const Dataset& ds, const SplitCandidate& test) {
  if (ds.feature_is_numeric(test.feature)) return 2;
  return static_cast<std::size_t>(ds.feature_category_count(test.feature));
}

struct SplitScore {
  double ratio;
  std::vector<std::vector<std::size_t>> branches;  // known instances only
};

// Gain ratio over the known-valued instances of the subset; nullopt when
// fewer than two branches are non-empty.
std::optional<SplitScore> score_split(const Dataset& ds,
                                      const std::vector<std::size_t>& subset,
                                      const SplitCandidate& test) {
  const std::size_t n_branches = branch_count_of(ds, test);
  const std::size_t n_classes = static_cast<std::size_t>(ds.class_count);
  std::vector<std::vector<std::size_t>> branches(n_branches);
  std::vector<std::vector<std::size_t>> branch_class(
      n_branches, std::vector<std::size_t>(n_classes, 0));
  std::vector<std::size_t> parent_class(n_classes, 0);
  std::size_t known = 0;
  for (std::size_t i : subset) {
    const double v = ds.instances[i].features[test.feature];
    if (is_missing(v)) continue;
    const std::size_t b = branch_of(ds, test, v);
    branches[b].push_back(i);
    ++branch_class[b][static_cast<std::size_t>(ds.instances[i].label)];
    ++parent_class[static_cast<std::size_t>(ds.instances[i].label)];
    ++known;
  }
  std::size_t non_empty = 0;
  for (const auto& b : branches)
    if (!b.empty()) ++non_empty;
  if (non_empty < 2) return std::nullopt;

  const double parent_h = entropy_bits(parent_class, known);
  double child_h = 0.0;
  double split_info = 0.0;
  for (std::size_t b = 0; b < n_branches; ++b) {
    if (branches[b].empty()) continue;
    const double w =
        static_cast<double>(branches[b].size()) / static_cast<double>(known);
    child_h += w * entropy_bits(branch_class[b], branches[b].size());
    split_info -= w * std::log2(w);
  }
  double gain = parent_h - child_h;
  if (gain < 0.0) gain = 0.0;
  double ratio = gain / split_info;
  if (ratio > 1.0) ratio = 1.0;
  return SplitScore{ratio, std::move(branches)};
}

struct GrowContext {
  const Dataset& ds;
  const LearnerSpec& spec;
};

std::unique_ptr<TreeNode> make_leaf(const GrowContext& ctx,
                                    std::vector<std::size_t> class_counts) {
  auto node = std::make_unique<TreeNode>();
  node->class_counts = std::move(class_counts);
  node->majority_class = 0;
  for (std::size_t c = 1; c < node->class_counts.size(); ++c) {
    if (node->class_counts[c] >
        node->class_counts[static_cast<std::size_t>(node->majority_class)])
      node->majority_class = static_cast<int>(c);
  }
  (void)ctx;
  return node;
}

std::unique_ptr<TreeNode> grow(const GrowContext& ctx,
                               const std::vector<std::size_t>& subset) {
  const Dataset& ds = ctx.ds;
  std::vector<std::size_t> counts(static_cast<std::size_t>(ds.class_count),
                                  0);
  for (std::size_t i : subset)
    ++counts[static_cast<std::size_t>(ds.instances[i].label)];
  auto node = make_leaf(ctx, counts);

  const std::size_t n = subset.size();
  const bool pure =
      counts[static_cast<std::size_t>(node->majority_class)] == n;
  if (pure || n < static_cast<std::size_t>(ctx.spec.min_node_instances))
    return node;

  // Best candidate over all features; ties go to the lower feature index
  // (and the lower threshold within a feature, handled by best_cut_point).
  std::optional<SplitCandidate> best;
  std::optional<SplitScore> best_score;
  for (std::size_t f = 0; f < ds.feature_count(); ++f) {
    SplitCandidate cand{f, 0.0};
    if (ds.feature_is_numeric(f)) {
      const auto cut = best_cut_point(ds, subset, f);
      if (!cut) continue;
      cand.threshold = cut->threshold;
    }
    const auto score = score_split(ds, subset, cand);
    if (!score) continue;
    if (!best_score || score->ratio > best_score->ratio) {
      best = cand;
      best_score = score;
    }
  }
  if (!best) return node;

  // Route instances: known values to their branch, missing values to the
  // branch that received the most known instances (ties to the lower
  // branch index).
  auto branches = std::move(best_score->branches);
  std::size_t majority_branch = 0;
  for (std::size_t b = 1; b < branches.size(); ++b) {
    if (branches[b].size() > branches[majority_branch].size())
      majority_branch = b;
  }
  for (std::size_t i : subset) {
    if (is_missing(ds.instances[i].features[best->feature]))
      branches[majority_branch].push_back(i);
  }

  node->feature = best->feature;
  node->categorical = !ds.feature_is_numeric(best->feature);
  node->threshold = best->threshold;
  node->children.reserve(branches.size());
  node->branch_counts.reserve(branches.size());
  for (auto& branch : branches) {
    node->branch_counts.push_back(branch.size());
    if (branch.empty()) {
      // A category with no training instances becomes a leaf carrying the
      // parent's majority class.
      auto leaf = make_leaf(
          ctx, std::vector<std::size_t>(
                   static_cast<std::size_t>(ds.class_count), 0));
      leaf->majority_class = node->majority_class;
      node->children.push_back(std::move(leaf));
    } else {
      node->children.push_back(grow(ctx, branch));
    }
  }
  return node;
}

std::size_t node_total(const TreeNode& node) {
  std::size_t total = 0;
  for (std::size_t c : node.class_counts) total += c;
  return total;
}

// Pessimistic error estimate: observed errors scaled up to the upper
// confidence bound of the binomial error proportion.
double pessimistic_errors(const TreeNode& node, double cf) {
  const double n = static_cast<double>(node_total(node));
  if (n == 0.0) return 0.0;
  const double errors =
      n - static_cast<double>(
              node.class_counts[static_cast<std::size_t>(
                  node.majority_class)]);
  return n * binomial_upper_bound(errors, n, cf);
}

// Bottom-up subtree replacement; returns the subtree's pessimistic error.
double prune(TreeNode& node, double cf) {
  if (node.is_leaf()) return pessimistic_errors(node, cf);
  double subtree_errors = 0.0;
  for (auto& child : node.children) subtree_errors += prune(*child, cf);
  const double leaf_errors = pessimistic_errors(node, cf);
  if (leaf_errors <= subtree_errors) {
    node.children.clear();
    node.branch_counts.clear();
    return leaf_errors;
  }
  return subtree_errors;
}

std::size_t count_leaves(const TreeNode& node) {
  if (node.is_leaf()) return 1;
  std::size_t total = 0;
  for (const auto& child : node.children) total += count_leaves(*child);
  return total;
}

void dump(const TreeNode& node, const Schema& schema, int depth,
          std::ostringstream& out) {
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  if (node.is_leaf()) {
    out << indent << "leaf class="
        << schema.label_column().categories[static_cast<std::size_t>(
               node.majority_class)]
        << " counts=[";
    for (std::size_t c = 0; c < node.class_counts.size(); ++c) {
      if (c) out << ",";
      out << node.class_counts[c];
    }
    out << "]\n";
    return;
  }
  const Column& col = schema.feature_column(node.feature);
  if (node.categorical) {
    out << indent << "test " << col.name << " (categorical)\n";
    for (std::size_t b = 0; b < node.children.size(); ++b) {
      out << indent << " = " << col.categories[b] << " (n="
          << node.branch_counts[b] << ")\n";
      dump(*node.children[b], schema, depth + 2, out);
    }
  } else {
    out << indent << "test " << col.name << " > " << node.threshold << "\n";
    out << indent << " false (n=" << node.branch_counts[0] << ")\n";
    dump(*node.children[0], schema, depth + 2, out);
    out << indent << " true (n=" << node.branch_counts[1] << ")\n";
    dump(*node.children[1], schema, depth + 2, out);
  }
}

}  // namespace

std::optional<double> gain_ratio(const Dataset& ds,
                                 const std::vector<std::size_t>& subset,
                                 const SplitCandidate& test) {
  const auto& idx = subset.empty() ? all_indices(ds) : subset;
  const auto score = score_split(ds, idx, test);
  if (!score) return std::nullopt;
  return score->ratio;
}

std::optional<CutPoint> best_cut_point(const Dataset& ds,
                                       const std::vector<std::size_t>& subset,
                                       std::size_t feature) {
  if (!ds.feature_is_numeric(feature))
    throw Error("best_cut_point requires a numeric feature");
  const auto& idx = subset.empty() ? all_indices(ds) : subset;
  std::vector<std::pair<double, int>> values;  // (value, label)
  values.reserve(idx.size());
  for (std::size_t i : idx) {
    const double v = ds.instances[i].features[feature];
    if (!is_missing(v)) values.emplace_back(v, ds.instances[i].label);
  }
  if (values.size() < 2) return std::nullopt;
  std::sort(values.begin(), values.end());

  // Distinct observed values with the set of labels seen at each.
  std::vector<double> distinct;
  std::vector<std::set<int>> labels_at;
  for (const auto& [v, label] : values) {
    if (distinct.empty() || v != distinct.back()) {
      distinct.push_back(v);
      labels_at.emplace_back();
    }
    labels_at.back().insert(label);
  }
  if (distinct.size() < 2) return std::nullopt;

  std::optional<CutPoint> best;
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
    // A class boundary: the two adjacent value groups are not both pure
    // with the same class.
    const bool same_pure_class = labels_at[i].size() == 1 &&
                                 labels_at[i + 1].size() == 1 &&
                                 *labels_at[i].begin() ==
                                     *labels_at[i + 1].begin();
    if (same_pure_class) continue;
    const double threshold = 0.5 * (distinct[i] + distinct[i + 1]);
    const auto score = score_split(ds, idx, SplitCandidate{feature, threshold});
    if (!score) continue;
    if (!best || score->ratio > best->score) {
      best = CutPoint{threshold, score->ratio};
    }
  }
  return best;
}

TreeModel::TreeModel(std::unique_ptr<TreeNode> root, Schema schema,
                     int class_count)
    : root_(std::move(root)),
      schema_(std::move(schema)),
      class_count_(class_count) {}

int TreeModel::classify(const Instance& x) const {
  const TreeNode* node = root_.get();
  while (!node->is_leaf()) {
    const double v = x.features[node->feature];
    std::size_t branch;
    bool known = !is_missing(v);
    if (known && node->categorical) {
      // Unseen category indices are treated as missing.
      known = v >= 0.0 &&
              static_cast<std::size_t>(v) < node->children.size();
    }
    if (known) {
      branch = node->categorical ? static_cast<std::size_t>(v)
                                 : (v > node->threshold ? 1 : 0);
    } else {
      branch = 0;
      for (std::size_t b = 1; b < node->branch_counts.size(); ++b) {
        if (node->branch_counts[b] > node->branch_counts[branch]) branch = b;
      }
    }
    node = node->children[branch].get();
  }
  return node->majority_class;
}

std::size_t TreeModel::leaf_count() const { return count_leaves(*root_); }

std::string TreeModel::to_text() const {
  std::ostringstream out;
  dump(*root_, schema_, 0, out);
  return out.str();
}

TreeModel dtree_grow(const Dataset& train, const LearnerSpec& spec) {
  if (train.instances.empty()) throw Error("decision tree: empty training set");
  GrowContext ctx{train, spec};
  auto root = grow(ctx, all_indices(train));
  return TreeModel(std::move(root), train.schema, train.class_count);
}

TreeModel dtree_train(const Dataset& train, const LearnerSpec& spec) {
  if (train.instances.empty()) throw Error("decision tree: empty training set");
  GrowContext ctx{train, spec};
  auto root = grow(ctx, all_indices(train));
  if (spec.prune) prune(*root, spec.pruning_confidence);
  return TreeModel(std::move(root), train.schema, train.class_count);
}

}  // namespace mislabel
