#pragma once

#include <cstdint>

#include "mislabel/learner.hpp"

namespace mislabel {

// Maps an instance to the pattern vector consumed by the linear machine:
// a constant 1, then each numeric feature (missing values imputed with the
// training mean, optionally z-scored), then a one-of-K block per
// categorical feature with one extra slot flagging a missing value.
class FeatureEncoder {
 public:
  FeatureEncoder() = default;
  static FeatureEncoder fit(const Dataset& train, bool standardize);

  std::size_t encoded_length() const { return length_; }
  void encode(const Instance& x, std::vector<double>& out) const;

 private:
  struct FeatureLayout {
    bool numeric = true;
    std::size_t offset = 0;
    std::size_t categories = 0;  // one-hot width excluding the missing slot
    double impute = 0.0;         // training mean (numeric only)
    double center = 0.0;         // z-score parameters (identity by default)
    double scale = 1.0;
  };
  std::vector<FeatureLayout> layout_;
  std::size_t length_ = 1;
};

// R linear discriminant functions; classification is the argmax of
// g_i(Y) = W_i . Y with exact ties resolved to the smaller class index.
class LinearMachineModel : public Model {
 public:
  LinearMachineModel(std::vector<std::vector<double>> weights,
                     FeatureEncoder encoder);

  int classify(const Instance& x) const override;
  const std::vector<std::vector<double>>& weights() const { return weights_; }
  const FeatureEncoder& encoder() const { return encoder_; }
  int classify_encoded(const std::vector<double>& y) const;

 private:
  std::vector<std::vector<double>> weights_;
  FeatureEncoder encoder_;
};

// Thermal error-correction training: on a misclassification of a true
// class i as j, W_i gains and W_j loses c*Y, where the correction c
// follows a geometric temperature schedule (spec.initial_temperature,
// spec.temperature_decay per presentation, spec.temperature_floor).
// Training stops at the floor or after a full error-free pass. The
// procedure runs spec.restarts times under distinct seeded instance
// orderings; the machine whose predicted-class partition of the training
// data maximizes the gain ratio against the true labels is returned
// (ties to the lowest restart index).
LinearMachineModel lm_train(const Dataset& train, const LearnerSpec& spec,
                            std::uint64_t seed);

// Gain ratio of the partition induced by predicted labels against the true
// labels, in bits; 0 when the predictions form fewer than two groups.
double prediction_gain_ratio(const std::vector<int>& predicted,
                             const std::vector<int>& actual, int class_count);

}  // namespace mislabel
