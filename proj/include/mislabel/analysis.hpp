#pragma once

#include <utility>
#include <vector>

#include "mislabel/stats.hpp"

namespace mislabel {

// Per-detector error rates under the independence assumption. An E1 error
// discards a correctly labeled instance; an E2 error keeps a mislabeled
// one.
struct DetectorRates {
  std::vector<double> e1_rates;
  std::vector<double> e2_rates;

  void validate() const;
};

// Estimated filter precision from discard/corruption bookkeeping:
//   p_e1 = (discarded - intersection) / (total - corrupted)
//   p_e2 = (corrupted - intersection) / corrupted   (0 when nothing was
//          corrupted)
// Counts may be run-averaged, hence real-valued.
std::pair<double, double> precision_estimates(double discarded,
                                              double corrupted,
                                              double intersection,
                                              double total);

// Probability that more than half of m equal-rate independent detectors
// err: the upper tail of Bin(m, p) above floor(m/2). The same form covers
// E1 and E2 errors of a majority filter.
double analytic_majority_error(int m, double p);

// Consensus filter error probabilities under independence: every detector
// must err for an E1 error (product of rates); any detector erring causes
// an E2 error (complement of the product of complements).
double analytic_consensus_e1(const std::vector<double>& rates);
double analytic_consensus_e2(const std::vector<double>& rates);

}  // namespace mislabel
