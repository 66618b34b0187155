#include "mislabel/nearest_neighbor.hpp"

#include <algorithm>
#include <cmath>

namespace mislabel {

NNModel::NNModel(Dataset train, int k,
                 std::optional<Standardizer> standardizer)
    : train_(std::move(train)), k_(k), standardizer_(std::move(standardizer)) {
  if (train_.instances.empty()) throw Error("nearest neighbor: empty model");
  if (k_ < 1) throw Error("nearest neighbor: k must be at least 1");
}

double NNModel::distance_squared(const Instance& a, const Instance& b) const {
  double d = 0.0;
  for (std::size_t f = 0; f < train_.feature_count(); ++f) {
    const double va = a.features[f];
    const double vb = b.features[f];
    if (is_missing(va) || is_missing(vb)) {
      d += 1.0;
    } else if (train_.feature_is_numeric(f)) {
      double xa = va;
      double xb = vb;
      if (standardizer_) {
        xa = standardizer_->apply(f, xa);
        xb = standardizer_->apply(f, xb);
      }
      d += (xa - xb) * (xa - xb);
    } else {
      d += va == vb ? 0.0 : 1.0;
    }
  }
  return d;
}

int NNModel::classify(const Instance& x) const {
  const std::size_t n = train_.size();
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_), n);
  // (distance, stored index); the index breaks exact ties toward earlier
  // stored instances.
  std::vector<std::pair<double, std::size_t>> nearest;
  nearest.reserve(k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = distance_squared(train_.instances[i], x);
    const std::pair<double, std::size_t> entry{d, i};
    if (nearest.size() < k || entry < nearest.back()) {
      nearest.insert(
          std::upper_bound(nearest.begin(), nearest.end(), entry), entry);
      if (nearest.size() > k) nearest.pop_back();
    }
  }
  if (k == 1) return train_.instances[nearest.front().second].label;
  std::vector<int> votes(static_cast<std::size_t>(train_.class_count), 0);
  for (const auto& [d, i] : nearest)
    ++votes[static_cast<std::size_t>(train_.instances[i].label)];
  int best = 0;
  for (std::size_t c = 1; c < votes.size(); ++c)
    if (votes[c] > votes[static_cast<std::size_t>(best)])
      best = static_cast<int>(c);
  return best;
}

NNModel nn_train(const Dataset& train, const LearnerSpec& spec) {
  std::optional<Standardizer> standardizer;
  if (spec.standardize) standardizer = Standardizer::fit(train);
  return NNModel(train, spec.k, std::move(standardizer));
}

}  // namespace mislabel
