#include "mislabel/linear_machine.hpp"

#include <cmath>
#include <numeric>

#include "mislabel/rng.hpp"

namespace mislabel {

FeatureEncoder FeatureEncoder::fit(const Dataset& train, bool standardize) {
  FeatureEncoder enc;
  enc.layout_.resize(train.feature_count());
  std::size_t offset = 1;  // slot 0 is the constant 1
  for (std::size_t f = 0; f < train.feature_count(); ++f) {
    FeatureLayout& fl = enc.layout_[f];
    fl.offset = offset;
    if (train.feature_is_numeric(f)) {
      fl.numeric = true;
      double sum = 0.0;
      std::size_t known = 0;
      for (const auto& inst : train.instances) {
        if (!is_missing(inst.features[f])) {
          sum += inst.features[f];
          ++known;
        }
      }
      fl.impute = known ? sum / static_cast<double>(known) : 0.0;
      if (standardize) {
        double ss = 0.0;
        for (const auto& inst : train.instances) {
          if (!is_missing(inst.features[f])) {
            const double d = inst.features[f] - fl.impute;
            ss += d * d;
          }
        }
        const double sd =
            known > 1 ? std::sqrt(ss / static_cast<double>(known - 1)) : 0.0;
        fl.center = fl.impute;
        fl.scale = sd > 0.0 ? sd : 1.0;
      }
      offset += 1;
    } else {
      fl.numeric = false;
      fl.categories =
          static_cast<std::size_t>(train.feature_category_count(f));
      offset += fl.categories + 1;  // categories plus a missing slot
    }
  }
  enc.length_ = offset;
  return enc;
}

void FeatureEncoder::encode(const Instance& x, std::vector<double>& out) const {
  out.assign(length_, 0.0);
  out[0] = 1.0;
  for (std::size_t f = 0; f < layout_.size(); ++f) {
    const FeatureLayout& fl = layout_[f];
    const double v = x.features[f];
    if (fl.numeric) {
      const double raw = is_missing(v) ? fl.impute : v;
      out[fl.offset] = (raw - fl.center) / fl.scale;
    } else if (is_missing(v) || v < 0.0 ||
               static_cast<std::size_t>(v) >= fl.categories) {
      out[fl.offset + fl.categories] = 1.0;  // missing / unseen slot
    } else {
      out[fl.offset + static_cast<std::size_t>(v)] = 1.0;
    }
  }
}

LinearMachineModel::LinearMachineModel(
    std::vector<std::vector<double>> weights, FeatureEncoder encoder)
    : weights_(std::move(weights)), encoder_(std::move(encoder)) {
  if (weights_.empty()) throw Error("linear machine: no discriminants");
}

int LinearMachineModel::classify_encoded(const std::vector<double>& y) const {
  int best = 0;
  double best_g = 0.0;
  for (std::size_t c = 0; c < weights_.size(); ++c) {
    double g = 0.0;
    const auto& w = weights_[c];
    for (std::size_t i = 0; i < w.size(); ++i) g += w[i] * y[i];
    // Strict inequality keeps exact ties at the smaller class index.
    if (c == 0 || g > best_g) {
      best = static_cast<int>(c);
      best_g = g;
    }
  }
  return best;
}

int LinearMachineModel::classify(const Instance& x) const {
  std::vector<double> y;
  encoder_.encode(x, y);
  return classify_encoded(y);
}

double prediction_gain_ratio(const std::vector<int>& predicted,
                             const std::vector<int>& actual,
                             int class_count) {
  const std::size_t n = predicted.size();
  if (n == 0 || predicted.size() != actual.size())
    throw Error("prediction_gain_ratio: size mismatch");
  const std::size_t r = static_cast<std::size_t>(class_count);
  std::vector<std::size_t> pred_count(r, 0), true_count(r, 0);
  std::vector<std::vector<std::size_t>> joint(r,
                                              std::vector<std::size_t>(r, 0));
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = static_cast<std::size_t>(predicted[i]);
    const auto a = static_cast<std::size_t>(actual[i]);
    ++pred_count[p];
    ++true_count[a];
    ++joint[p][a];
  }
  const auto h = [n](const std::vector<std::size_t>& counts) {
    double out = 0.0;
    for (std::size_t c : counts) {
      if (!c) continue;
      const double p = static_cast<double>(c) / static_cast<double>(n);
      out -= p * std::log2(p);
    }
    return out;
  };
  const double split_info = h(pred_count);
  if (split_info <= 0.0) return 0.0;  // single predicted class
  double cond = 0.0;
  for (std::size_t p = 0; p < r; ++p) {
    if (!pred_count[p]) continue;
    const double w =
        static_cast<double>(pred_count[p]) / static_cast<double>(n);
    double hp = 0.0;
    for (std::size_t a = 0; a < r; ++a) {
      if (!joint[p][a]) continue;
      const double q = static_cast<double>(joint[p][a]) /
                       static_cast<double>(pred_count[p]);
      hp -= q * std::log2(q);
    }
    cond += w * hp;
  }
  double gain = h(true_count) - cond;
  if (gain < 0.0) gain = 0.0;
  return gain / split_info;
}

namespace {

struct TrainedMachine {
  std::vector<std::vector<double>> weights;
  double score;
};

TrainedMachine run_restart(const Dataset& train, const FeatureEncoder& enc,
                           const LearnerSpec& spec, std::uint64_t seed,
                           const std::vector<std::vector<double>>& encoded) {
  const std::size_t n = train.size();
  const std::size_t r = static_cast<std::size_t>(train.class_count);
  std::vector<std::vector<double>> w(
      r, std::vector<double>(enc.encoded_length(), 0.0));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);

  const auto predict = [&](const std::vector<double>& y) {
    int best = 0;
    double best_g = 0.0;
    for (std::size_t c = 0; c < r; ++c) {
      double g = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) g += w[c][i] * y[i];
      if (c == 0 || g > best_g) {
        best = static_cast<int>(c);
        best_g = g;
      }
    }
    return best;
  };

  double temperature = spec.initial_temperature;
  bool at_floor = false;
  while (!at_floor) {
    bool any_error = false;
    for (std::size_t t : order) {
      const auto& y = encoded[t];
      const int truth = train.instances[t].label;
      const int guess = predict(y);
      if (guess != truth) {
        any_error = true;
        auto& wi = w[static_cast<std::size_t>(truth)];
        auto& wj = w[static_cast<std::size_t>(guess)];
        for (std::size_t i = 0; i < y.size(); ++i) {
          wi[i] += temperature * y[i];
          wj[i] -= temperature * y[i];
        }
      }
      temperature *= spec.temperature_decay;
      if (temperature <= spec.temperature_floor) {
        at_floor = true;
        break;
      }
    }
    if (!any_error) break;  // full error-free pass
  }

  std::vector<int> predicted(n);
  std::vector<int> actual(n);
  for (std::size_t t = 0; t < n; ++t) {
    predicted[t] = predict(encoded[t]);
    actual[t] = train.instances[t].label;
  }
  return TrainedMachine{
      std::move(w),
      prediction_gain_ratio(predicted, actual, train.class_count)};
}

}  // namespace

LinearMachineModel lm_train(const Dataset& train, const LearnerSpec& spec,
                            std::uint64_t seed) {
  if (train.instances.empty())
    throw Error("linear machine: empty training set");
  FeatureEncoder enc = FeatureEncoder::fit(train, spec.standardize);
  std::vector<std::vector<double>> encoded(train.size());
  for (std::size_t t = 0; t < train.size(); ++t)
    enc.encode(train.instances[t], encoded[t]);

  std::optional<TrainedMachine> best;
  for (int restart = 0; restart < spec.restarts; ++restart) {
    TrainedMachine machine =
        run_restart(train, enc, spec,
                    seed::derive(seed, seed::kRestart,
                                 static_cast<std::uint64_t>(restart)),
                    encoded);
    if (!best || machine.score > best->score) best = std::move(machine);
  }
  return LinearMachineModel(std::move(best->weights), std::move(enc));
}

}  // namespace mislabel
