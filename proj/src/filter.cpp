#include "mislabel/filter.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

#include "mislabel/rng.hpp"

namespace mislabel {

TagMatrix::TagMatrix(std::size_t instances, std::vector<LearnerSpec> detectors)
    : instances_(instances),
      detector_specs_(std::move(detectors)),
      grid_(instances * detector_specs_.size(), 0) {
  fold_assignment.assign(instances, -1);
}

std::size_t TagMatrix::wrong_count(std::size_t t) const {
  std::size_t wrong = 0;
  for (std::size_t d = 0; d < detector_count(); ++d) {
    if (!verdict(t, d)) ++wrong;
  }
  return wrong;
}

std::string TagMatrix::to_table() const {
  std::ostringstream out;
  out << "instance\tfold";
  for (const auto& spec : detector_specs_) out << "\t" << learner_name(spec);
  out << "\n";
  for (std::size_t t = 0; t < instances_; ++t) {
    out << t << "\t" << fold_assignment[t];
    for (std::size_t d = 0; d < detector_count(); ++d)
      out << "\t" << (verdict(t, d) ? 1 : 0);
    out << "\n";
  }
  return out.str();
}

TagMatrix cv_tag(const Dataset& train, const std::vector<LearnerSpec>& detectors,
                 int n_folds, std::uint64_t seed, int threads) {
  if (detectors.empty()) throw Error("cv_tag: no detectors");
  if (n_folds < 2) throw Error("cv_tag: need at least 2 folds");
  const auto folds =
      make_folds(train.size(), n_folds, seed::derive(seed, seed::kFolds));

  TagMatrix tags(train.size(), detectors);
  tags.fold_training_indices.resize(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    for (std::size_t t : folds[f]) tags.fold_assignment[t] = static_cast<int>(f);
  }

  const auto run_fold = [&](std::size_t f) {
    // Train on the complement of fold f, preserving instance order.
    std::vector<std::size_t> training;
    training.reserve(train.size() - folds[f].size());
    for (std::size_t t = 0; t < train.size(); ++t) {
      if (tags.fold_assignment[t] != static_cast<int>(f)) training.push_back(t);
    }
    if (training.empty()) throw Error("cv_tag: fold too small to train on");
    tags.fold_training_indices[f] = training;
    const Dataset fold_train = subset(train, training);
    for (std::size_t d = 0; d < detectors.size(); ++d) {
      const ModelPtr model = train_learner(
          fold_train, detectors[d],
          seed::derive(seed, seed::kDetector, f, d));
      for (std::size_t t : folds[f]) {
        const int predicted = model->classify(train.instances[t]);
        tags.set_verdict(t, d, predicted == train.instances[t].label);
      }
    }
  };

  if (threads <= 1 || folds.size() <= 1) {
    for (std::size_t f = 0; f < folds.size(); ++f) run_fold(f);
    return tags;
  }

  // Folds write disjoint rows of the grid, so they can run concurrently.
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(folds.size());
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), folds.size());
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t f = w; f < folds.size(); f += n_workers) {
        try {
          run_fold(f);
        } catch (...) {
          errors[f] = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : workers) worker.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return tags;
}

FilterResult apply_filter(const TagMatrix& tags, const FilterPolicy& policy) {
  const std::size_t m = tags.detector_count();
  if (policy.kind == FilterPolicy::Kind::single && policy.detector >= m)
    throw Error("filter: detector index out of range");
  if (policy.kind == FilterPolicy::Kind::threshold &&
      (policy.min_wrong < 1 || policy.min_wrong > m))
    throw Error("filter: threshold out of range");

  FilterResult result;
  for (std::size_t t = 0; t < tags.instance_count(); ++t) {
    bool discard = false;
    switch (policy.kind) {
      case FilterPolicy::Kind::none:
        break;
      case FilterPolicy::Kind::single:
        discard = !tags.verdict(t, policy.detector);
        break;
      case FilterPolicy::Kind::threshold:
        discard = tags.wrong_count(t) >= policy.min_wrong;
        break;
    }
    (discard ? result.discarded : result.kept).push_back(t);
  }
  return result;
}

ModelPtr filter_and_retrain(const Dataset& train, const TagMatrix& tags,
                            const FilterPolicy& policy,
                            const LearnerSpec& final_learner,
                            std::uint64_t seed) {
  const FilterResult result = apply_filter(tags, policy);
  if (result.kept.empty())
    throw Error("filter discarded every training instance");
  return train_learner(subset(train, result.kept), final_learner, seed);
}

int majority_vote_classify(const std::vector<const Model*>& models,
                           const Instance& x, int class_count) {
  if (models.empty()) throw Error("majority vote over no models");
  std::vector<int> votes(static_cast<std::size_t>(class_count), 0);
  for (const Model* model : models)
    ++votes[static_cast<std::size_t>(model->classify(x))];
  int best = 0;
  for (std::size_t c = 1; c < votes.size(); ++c) {
    if (votes[c] > votes[static_cast<std::size_t>(best)])
      best = static_cast<int>(c);
  }
  return best;
}

}  // namespace mislabel
