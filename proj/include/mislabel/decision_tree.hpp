#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mislabel/learner.hpp"

namespace mislabel {

// Candidate node test: a per-category branch on a categorical feature, or
// the binary test "feature > threshold" on a numeric one.
struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;  // ignored for categorical features
};

struct TreeNode {
  // Per-class training counts of the instances that reached this node.
  std::vector<std::size_t> class_counts;
  int majority_class = 0;

  // Empty children = leaf. Numeric tests have two children in the order
  // [value <= threshold, value > threshold]; categorical tests have one
  // child per declared category.
  std::size_t feature = 0;
  bool categorical = false;
  double threshold = 0.0;
  std::vector<std::unique_ptr<TreeNode>> children;
  // Training instances routed into each branch (missing values included).
  std::vector<std::size_t> branch_counts;

  bool is_leaf() const { return children.empty(); }
};

// Univariate decision tree grown by gain ratio and pruned with a
// pessimistic binomial error bound.
class TreeModel : public Model {
 public:
  TreeModel(std::unique_ptr<TreeNode> root, Schema schema, int class_count);

  int classify(const Instance& x) const override;
  std::size_t leaf_count() const;
  const TreeNode& root() const { return *root_; }
  // Indented dump for debugging; not a compatibility surface.
  std::string to_text() const;

 private:
  std::unique_ptr<TreeNode> root_;
  Schema schema_;
  int class_count_;
};

// Information gain divided by split information, both in bits, for the
// instances selected by `subset` (all instances when empty). Instances
// with a missing value of the tested feature are left out. Returns
// nothing for an inadmissible candidate (fewer than two non-empty
// branches).
std::optional<double> gain_ratio(const Dataset& ds,
                                 const std::vector<std::size_t>& subset,
                                 const SplitCandidate& test);

// Best binary cut for a numeric feature: midpoints between adjacent
// distinct observed values are candidates wherever the two value groups
// are not pure with the same class; the gain-ratio-maximizing one wins.
// Returns nothing when no such boundary exists.
struct CutPoint {
  double threshold;
  double score;
};
std::optional<CutPoint> best_cut_point(const Dataset& ds,
                                       const std::vector<std::size_t>& subset,
                                       std::size_t feature);

// Grows to purity (no pruning).
TreeModel dtree_grow(const Dataset& train, const LearnerSpec& spec);
// Grow + pessimistic pruning at spec.pruning_confidence (when spec.prune).
TreeModel dtree_train(const Dataset& train, const LearnerSpec& spec);

}  // namespace mislabel
