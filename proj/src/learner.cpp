#include "mislabel/learner.hpp"

#include <cmath>

#include "mislabel/decision_tree.hpp"
#include "mislabel/linear_machine.hpp"
#include "mislabel/nearest_neighbor.hpp"

namespace mislabel {

std::string learner_name(const LearnerSpec& spec) {
  switch (spec.kind) {
    case LearnerKind::decision_tree:
      return "tree";
    case LearnerKind::nearest_neighbor:
      return spec.k == 1 ? "1-nn" : std::to_string(spec.k) + "-nn";
    case LearnerKind::linear_machine:
      return "lm";
  }
  return "unknown";
}

LearnerSpec parse_learner(const std::string& name) {
  if (name == "tree") return LearnerSpec::decision_tree();
  if (name == "nn" || name == "1nn") return LearnerSpec::nearest_neighbor(1);
  if (name == "lm") return LearnerSpec::linear_machine();
  const auto with_k = [](const std::string& digits) {
    const int k = std::stoi(digits);
    if (k < 1) throw Error("nearest neighbor k must be at least 1");
    return LearnerSpec::nearest_neighbor(k);
  };
  if (name.rfind("nn:", 0) == 0) return with_k(name.substr(3));
  // the display form, e.g. "1-nn" or "5-nn"
  const auto dash = name.find("-nn");
  if (dash != std::string::npos && dash > 0 &&
      dash + 3 == name.size() &&
      name.find_first_not_of("0123456789") == dash)
    return with_k(name.substr(0, dash));
  throw Error("unknown learner '" + name + "' (expected tree, nn[:k], lm)");
}

ModelPtr train_learner(const Dataset& train, const LearnerSpec& spec,
                       std::uint64_t seed) {
  switch (spec.kind) {
    case LearnerKind::decision_tree:
      return std::make_unique<TreeModel>(dtree_train(train, spec));
    case LearnerKind::nearest_neighbor:
      return std::make_unique<NNModel>(nn_train(train, spec));
    case LearnerKind::linear_machine:
      return std::make_unique<LinearMachineModel>(lm_train(train, spec, seed));
  }
  throw Error("unknown learner kind");
}

double accuracy(const Model& model, const Dataset& test) {
  if (test.instances.empty()) throw Error("accuracy over an empty test set");
  std::size_t hits = 0;
  for (const auto& inst : test.instances) {
    if (model.classify(inst) == inst.label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

Standardizer Standardizer::fit(const Dataset& train) {
  Standardizer s;
  s.offset.assign(train.feature_count(), 0.0);
  s.scale.assign(train.feature_count(), 1.0);
  for (std::size_t f = 0; f < train.feature_count(); ++f) {
    if (!train.feature_is_numeric(f)) continue;
    double sum = 0.0;
    std::size_t known = 0;
    for (const auto& inst : train.instances) {
      if (!is_missing(inst.features[f])) {
        sum += inst.features[f];
        ++known;
      }
    }
    if (known == 0) continue;
    const double m = sum / static_cast<double>(known);
    double ss = 0.0;
    for (const auto& inst : train.instances) {
      if (!is_missing(inst.features[f])) {
        const double d = inst.features[f] - m;
        ss += d * d;
      }
    }
    const double sd =
        known > 1 ? std::sqrt(ss / static_cast<double>(known - 1)) : 0.0;
    s.offset[f] = m;
    s.scale[f] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

}  // namespace mislabel
