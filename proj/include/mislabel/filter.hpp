#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mislabel/learner.hpp"

namespace mislabel {

// Per-instance, per-detector verdicts from cross-validated tagging.
// verdict(t, d) is true when detector d, trained on the folds excluding
// instance t's fold, classified t as its training label.
class TagMatrix {
 public:
  TagMatrix() = default;
  TagMatrix(std::size_t instances, std::vector<LearnerSpec> detectors);

  std::size_t instance_count() const { return instances_; }
  std::size_t detector_count() const { return detector_specs_.size(); }
  bool verdict(std::size_t t, std::size_t d) const {
    return grid_[t * detector_count() + d] != 0;
  }
  void set_verdict(std::size_t t, std::size_t d, bool correct) {
    grid_[t * detector_count() + d] = correct ? 1 : 0;
  }
  std::size_t wrong_count(std::size_t t) const;

  const std::vector<LearnerSpec>& detector_specs() const {
    return detector_specs_;
  }

  std::vector<int> fold_assignment;
  // Training indices actually used for each fold's detectors, recorded for
  // leakage audits.
  std::vector<std::vector<std::size_t>> fold_training_indices;

  // Flat delimited export: instance id, fold, one verdict column per
  // detector (1 = tagged correct).
  std::string to_table() const;

 private:
  std::size_t instances_ = 0;
  std::vector<LearnerSpec> detector_specs_;
  std::vector<std::uint8_t> grid_;
};

// Discard rule over a TagMatrix. single(d) discards what detector d got
// wrong; threshold(x) discards instances that at least x detectors got
// wrong. Majority (more than half wrong) and consensus (all wrong) are
// threshold presets.
struct FilterPolicy {
  enum class Kind { none, single, threshold };
  Kind kind = Kind::none;
  std::size_t detector = 0;  // single
  std::size_t min_wrong = 1;  // threshold

  static FilterPolicy none() { return {}; }
  static FilterPolicy single(std::size_t d) {
    return {Kind::single, d, 0};
  }
  static FilterPolicy threshold(std::size_t x) {
    return {Kind::threshold, 0, x};
  }
  static FilterPolicy majority(std::size_t m) {
    return threshold(m / 2 + 1);
  }
  static FilterPolicy consensus(std::size_t m) { return threshold(m); }
};

struct FilterResult {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> discarded;
};

// Cross-validated tagging: the training data is split into n seeded folds;
// for each fold every detector is trained on the other n-1 folds and each
// held-out instance is tagged correct/incorrect against its training
// label. threads > 1 distributes folds over worker threads; results are
// identical to the serial run.
TagMatrix cv_tag(const Dataset& train, const std::vector<LearnerSpec>& detectors,
                 int n_folds, std::uint64_t seed, int threads = 1);

FilterResult apply_filter(const TagMatrix& tags, const FilterPolicy& policy);

// Removes the discarded instances and trains the final learner on what is
// left.
ModelPtr filter_and_retrain(const Dataset& train, const TagMatrix& tags,
                            const FilterPolicy& policy,
                            const LearnerSpec& final_learner,
                            std::uint64_t seed);

// Unweighted plurality over the models' predictions; ties go to the
// smallest class index among the tied classes.
int majority_vote_classify(const std::vector<const Model*>& models,
                           const Instance& x, int class_count);

}  // namespace mislabel
