#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mislabel/dataset.hpp"

namespace mislabel {

enum class LearnerKind { decision_tree, nearest_neighbor, linear_machine };

struct LearnerSpec {
  LearnerKind kind = LearnerKind::decision_tree;
  // decision tree
  double pruning_confidence = 0.10;
  int min_node_instances = 2;
  bool prune = true;
  // nearest neighbor
  int k = 1;
  // linear machine
  int restarts = 10;
  double initial_temperature = 2.0;
  double temperature_decay = 0.999;
  double temperature_floor = 0.001;
  // z-score numeric features, fitted on the training data only
  bool standardize = false;

  static LearnerSpec decision_tree() { return {}; }
  static LearnerSpec nearest_neighbor(int k = 1) {
    LearnerSpec s;
    s.kind = LearnerKind::nearest_neighbor;
    s.k = k;
    return s;
  }
  static LearnerSpec linear_machine() {
    LearnerSpec s;
    s.kind = LearnerKind::linear_machine;
    return s;
  }
};

std::string learner_name(const LearnerSpec& spec);
// Parses "tree", "nn", "nn:K", "lm".
LearnerSpec parse_learner(const std::string& name);

// Trained classifiers are immutable and safe to share across threads.
class Model {
 public:
  virtual ~Model() = default;
  virtual int classify(const Instance& x) const = 0;
};

using ModelPtr = std::unique_ptr<const Model>;

// Trains a model of the requested kind. All trainers are deterministic
// functions of (dataset, spec, seed); only the linear machine consumes
// the seed (restart orderings).
ModelPtr train_learner(const Dataset& train, const LearnerSpec& spec,
                       std::uint64_t seed);

// Fraction of test instances classified as their label.
double accuracy(const Model& model, const Dataset& test);

// Per-feature z-scoring parameters, fitted on training data. Categorical
// features are left untouched; missing values are ignored during fitting.
struct Standardizer {
  std::vector<double> offset;
  std::vector<double> scale;

  static Standardizer fit(const Dataset& train);
  double apply(std::size_t feature, double value) const {
    return (value - offset[feature]) / scale[feature];
  }
};

}  // namespace mislabel
