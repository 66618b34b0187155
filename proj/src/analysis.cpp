#include "mislabel/analysis.hpp"

#include "mislabel/dataset.hpp"

namespace mislabel {

namespace {

void check_rate(double r, const char* what) {
  if (!(r >= 0.0 && r <= 1.0))
    throw Error(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

void DetectorRates::validate() const {
  if (e1_rates.empty() || e1_rates.size() != e2_rates.size())
    throw Error("detector rates must be non-empty and of equal length");
  for (double r : e1_rates) check_rate(r, "E1 rate");
  for (double r : e2_rates) check_rate(r, "E2 rate");
}

std::pair<double, double> precision_estimates(double discarded,
                                              double corrupted,
                                              double intersection,
                                              double total) {
  if (corrupted < 0.0 || discarded < intersection || corrupted < intersection)
    throw Error("precision_estimates: inconsistent counts");
  if (total <= corrupted)
    throw Error("precision_estimates: total must exceed corrupted count");
  const double p_e1 = (discarded - intersection) / (total - corrupted);
  const double p_e2 =
      corrupted == 0.0 ? 0.0 : (corrupted - intersection) / corrupted;
  return {p_e1, p_e2};
}

double analytic_majority_error(int m, double p) {
  if (m < 1) throw Error("majority error model needs at least one detector");
  check_rate(p, "error rate");
  return binomial_upper_tail(m, m / 2 + 1, p);
}

double analytic_consensus_e1(const std::vector<double>& rates) {
  if (rates.empty()) throw Error("consensus error model needs detectors");
  double product = 1.0;
  for (double r : rates) {
    check_rate(r, "error rate");
    product *= r;
  }
  return product;
}

double analytic_consensus_e2(const std::vector<double>& rates) {
  if (rates.empty()) throw Error("consensus error model needs detectors");
  double none_err = 1.0;
  for (double r : rates) {
    check_rate(r, "error rate");
    none_err *= 1.0 - r;
  }
  return 1.0 - none_err;
}

}  // namespace mislabel
