#pragma once

#include <optional>

#include "mislabel/learner.hpp"

namespace mislabel {

// k-nearest-neighbor classifier over the full training set. The squared
// distance sums per-feature contributions: squared difference for numeric
// features, 0/1 overlap for categorical ones, and 1 whenever either
// operand is missing. Exact distance ties prefer the earlier stored
// instance; vote ties (k > 1) prefer the smaller class index.
class NNModel : public Model {
 public:
  NNModel(Dataset train, int k, std::optional<Standardizer> standardizer);

  int classify(const Instance& x) const override;
  double distance_squared(const Instance& a, const Instance& b) const;
  std::size_t stored_count() const { return train_.size(); }

 private:
  Dataset train_;
  int k_;
  std::optional<Standardizer> standardizer_;
};

NNModel nn_train(const Dataset& train, const LearnerSpec& spec);

}  // namespace mislabel
