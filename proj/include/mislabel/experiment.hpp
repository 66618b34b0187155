#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mislabel/filter.hpp"
#include "mislabel/noise.hpp"
#include "mislabel/synthetic.hpp"

namespace mislabel {

// Full experiment protocol: for each run the data is split into train and
// test; per noise level the training labels are corrupted within the
// declared pairs, tagged once by cross-validated detectors, filtered under
// each policy, and the final learners are trained on the kept subset and
// scored on the untouched test set.
struct ExperimentConfig {
  // Data source: delimited file + schema, or the synthetic generator.
  std::string data_path;
  std::string schema_path;
  std::optional<SyntheticSpec> synthetic;

  std::vector<std::pair<int, int>> noise_pairs;  // defaulted for synthetic
  std::vector<double> noise_levels{0.0, 0.05, 0.10, 0.20, 0.30, 0.40};
  int runs = 10;
  double train_fraction = 0.9;
  int cv_folds = 4;
  std::vector<LearnerSpec> detectors;       // default: tree, 1-nn, lm
  std::vector<LearnerSpec> final_learners;  // default: tree, 1-nn, lm
  bool single_filters = true;    // one single-algorithm filter per detector
  bool ensemble_filters = true;  // majority and consensus filters
  bool voting = true;            // majority-vote final classifier comparison
  bool standardize = false;
  std::uint64_t master_seed = 1;
  int threads = 1;

  void apply_defaults();

  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
};

// One filter column of the report. Policies are fixed per experiment:
// none, one single(d) per detector (optional), majority, consensus.
struct PolicyColumn {
  std::string name;
  FilterPolicy policy;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<std::string> learner_names;
  std::vector<PolicyColumn> filters;  // filters[0] is "none"
  std::vector<std::string> class_names;
  std::size_t train_size = 0;
  std::size_t test_size = 0;

  // Indexing: [learner][filter][level][run] for accuracy,
  // [filter][level][run] for per-filter series, [level][run] otherwise.
  std::vector<std::vector<std::vector<std::vector<double>>>> accuracy;
  std::vector<std::vector<double>> actual_noise;
  std::vector<std::vector<std::vector<double>>> discarded_counts;
  std::vector<std::vector<double>> corrupted_counts;
  std::vector<std::vector<std::vector<double>>> intersection_counts;
  // Leaf counts of the decision-tree final learner (empty when absent).
  std::vector<std::vector<std::vector<double>>> tree_leaves;
  int tree_learner = -1;
  // Majority-vote classifier accuracy per voting filter (none, mf, cf).
  std::vector<std::string> voting_filter_names;
  std::vector<std::vector<std::vector<double>>> voting_accuracy;
  // Mean class counts: pre-filter corrupted train [level][class], and
  // post-filter kept train [filter][level][class].
  std::vector<std::vector<double>> class_hist_pre;
  std::vector<std::vector<std::vector<double>>> class_hist_post;
  // Seeds recorded so any cell can be replayed: per-run split seeds and
  // per (run, level) noise/tagging seeds.
  std::vector<std::uint64_t> run_seeds;
  std::vector<std::uint64_t> split_seeds;
  std::vector<std::vector<std::uint64_t>> noise_seeds;
  std::vector<std::vector<std::uint64_t>> tag_seeds;

  // Index of the learner with the best mean unfiltered accuracy at the
  // lowest noise level; the voting table compares the ensemble to it.
  int reference_learner() const;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

// Writes the report files into out_dir: report.json (full provenance),
// flat TSV tables (accuracy, p-values, tree size, voting, precision,
// class distributions) and per-(learner, filter) accuracy series.
// Re-emitting the same report yields byte-identical files.
void emit_report(const ExperimentReport& report, const std::string& out_dir);

// Individual renderings, exposed for tests.
std::string render_accuracy_table(const ExperimentReport& report);
std::string render_pvalue_table(const ExperimentReport& report);
std::string render_tree_size_table(const ExperimentReport& report);
std::string render_voting_table(const ExperimentReport& report);
std::string render_precision_counts_table(const ExperimentReport& report);
std::string render_precision_rates_table(const ExperimentReport& report);
std::string render_class_distribution_table(const ExperimentReport& report);
std::string render_series(const ExperimentReport& report, int learner,
                          int filter);
std::string report_to_json_text(const ExperimentReport& report);

}  // namespace mislabel
