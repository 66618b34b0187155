// Command-line front end: label-noise filtering, noise injection, tag
// export, the full experiment protocol, and closed-form error-model
// queries.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mislabel/analysis.hpp"
#include "mislabel/experiment.hpp"
#include "mislabel/rng.hpp"

namespace {

using namespace mislabel;

std::vector<LearnerSpec> parse_learner_list(const std::string& text) {
  std::vector<LearnerSpec> specs;
  std::istringstream in(text);
  std::string name;
  while (std::getline(in, name, ',')) specs.push_back(parse_learner(name));
  if (specs.empty()) throw Error("empty learner list");
  return specs;
}

FilterPolicy parse_policy(const std::string& text, std::size_t m) {
  if (text == "none") return FilterPolicy::none();
  if (text == "majority" || text == "mf") return FilterPolicy::majority(m);
  if (text == "consensus" || text == "cf") return FilterPolicy::consensus(m);
  if (text.rfind("single:", 0) == 0)
    return FilterPolicy::single(std::stoul(text.substr(7)));
  if (text.rfind("threshold:", 0) == 0)
    return FilterPolicy::threshold(std::stoul(text.substr(10)));
  throw Error("unknown policy '" + text +
              "' (expected none, majority, consensus, single:D, threshold:X)");
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> rates;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) rates.push_back(std::stod(item));
  return rates;
}

struct TaggingArgs {
  std::string data, schema, detectors = "tree,nn,lm";
  int folds = 4;
  std::uint64_t seed = 1;
  int threads = 1;
};

void add_tagging_options(CLI::App* cmd, TaggingArgs& args) {
  cmd->add_option("--data", args.data, "delimited data file")->required();
  cmd->add_option("--schema", args.schema, "schema file")->required();
  cmd->add_option("--detectors", args.detectors,
                  "comma-separated detector list (tree, nn[:k], lm)");
  cmd->add_option("--folds", args.folds, "cross-validation folds");
  cmd->add_option("--seed", args.seed, "master seed");
  cmd->add_option("--threads", args.threads, "worker threads");
}

int run_cli(int argc, char** argv) {
  CLI::App app{"cross-validated ensemble filtering of mislabeled training "
               "instances"};
  app.require_subcommand(1);

  // --- experiment ---
  auto* experiment = app.add_subcommand(
      "experiment", "run the full filtering experiment protocol");
  std::string config_path, out_dir;
  ExperimentConfig config;
  std::string exp_pairs, exp_levels, exp_detectors, exp_finals;
  std::vector<std::size_t> synth_counts;
  SyntheticSpec synth;
  bool no_single = false, no_ensemble = false, no_voting = false;
  experiment->add_option("--config", config_path,
                         "JSON config file (flags override it)");
  experiment->add_option("--out", out_dir, "output directory")->required();
  auto* exp_data =
      experiment->add_option("--data", config.data_path, "data file");
  auto* exp_schema =
      experiment->add_option("--schema", config.schema_path, "schema file");
  auto* opt_counts = experiment->add_option(
      "--synthetic-classes", synth_counts,
      "per-class instance counts for the synthetic generator");
  auto* opt_dims = experiment->add_option("--synthetic-dims", synth.dims);
  auto* opt_psep =
      experiment->add_option("--pair-separation", synth.pair_separation);
  auto* opt_gsep =
      experiment->add_option("--group-separation", synth.group_separation);
  auto* opt_sigma = experiment->add_option("--sigma", synth.sigma);
  auto* opt_pairs = experiment->add_option(
      "--pairs", exp_pairs, "confusable class pairs, e.g. 0-1,2-3");
  auto* opt_levels = experiment->add_option(
      "--levels", exp_levels, "noise rates, e.g. 0,0.05,0.1,0.2,0.3,0.4");
  auto* opt_runs = experiment->add_option("--runs", config.runs);
  auto* opt_fraction =
      experiment->add_option("--train-fraction", config.train_fraction);
  auto* opt_folds = experiment->add_option("--folds", config.cv_folds);
  auto* opt_detectors = experiment->add_option("--detectors", exp_detectors);
  auto* opt_finals = experiment->add_option("--final-learners", exp_finals);
  experiment->add_flag("--no-single-filters", no_single);
  experiment->add_flag("--no-ensemble-filters", no_ensemble);
  experiment->add_flag("--no-voting", no_voting);
  auto* opt_standardize =
      experiment->add_flag("--standardize", config.standardize,
                           "z-score numeric features on training data");
  auto* opt_seed = experiment->add_option("--seed", config.master_seed);
  auto* opt_threads = experiment->add_option("--threads", config.threads);

  // --- filter ---
  auto* filter_cmd = app.add_subcommand(
      "filter", "tag one dataset and write the cleaned version");
  TaggingArgs filter_args;
  std::string policy_text = "majority", out_data, out_discarded, out_tags;
  add_tagging_options(filter_cmd, filter_args);
  filter_cmd->add_option("--policy", policy_text,
                         "none, majority, consensus, single:D, threshold:X");
  filter_cmd->add_option("--out-data", out_data, "cleaned data file")
      ->required();
  filter_cmd->add_option("--out-discarded", out_discarded,
                         "discarded instance ids, one per line");
  filter_cmd->add_option("--out-tags", out_tags, "tag matrix table");

  // --- inject ---
  auto* inject_cmd =
      app.add_subcommand("inject", "corrupt labels within class pairs");
  std::string inj_data, inj_schema, inj_pairs, inj_out_data, inj_out_mask;
  double inj_rate = 0.0;
  std::uint64_t inj_seed = 1;
  inject_cmd->add_option("--data", inj_data)->required();
  inject_cmd->add_option("--schema", inj_schema)->required();
  inject_cmd->add_option("--pairs", inj_pairs, "e.g. 0-1,2-3")->required();
  inject_cmd->add_option("--rate", inj_rate, "corruption probability")
      ->required();
  inject_cmd->add_option("--seed", inj_seed);
  inject_cmd->add_option("--out-data", inj_out_data)->required();
  inject_cmd->add_option("--out-mask", inj_out_mask)->required();

  // --- tags ---
  auto* tags_cmd =
      app.add_subcommand("tags", "emit the cross-validated tag matrix");
  TaggingArgs tags_args;
  std::string tags_out;
  add_tagging_options(tags_cmd, tags_args);
  tags_cmd->add_option("--out", tags_out, "tag matrix table")->required();

  // --- analytic ---
  auto* analytic =
      app.add_subcommand("analytic", "closed-form error-model queries");
  analytic->require_subcommand(1);
  auto* maj = analytic->add_subcommand(
      "majority", "majority-filter error probability for equal rates");
  int maj_m = 3;
  double maj_p = 0.0;
  maj->add_option("--m", maj_m, "number of detectors")->required();
  maj->add_option("--p", maj_p, "per-detector error rate")->required();
  auto* ce1 = analytic->add_subcommand(
      "consensus-e1", "probability every detector discards a good instance");
  auto* ce2 = analytic->add_subcommand(
      "consensus-e2", "probability some detector keeps a bad instance");
  std::string ce1_rates, ce2_rates;
  ce1->add_option("--rates", ce1_rates, "per-detector rates, e.g. 0.2,0.2,0.2")
      ->required();
  ce2->add_option("--rates", ce2_rates, "per-detector rates, e.g. 0.1,0.1,0.1")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (experiment->parsed()) {
    if (!config_path.empty()) {
      ExperimentConfig loaded =
          ExperimentConfig::from_json_text(read_text_file(config_path));
      // flags given on the command line win over the file
      if (*exp_data) loaded.data_path = config.data_path;
      if (*exp_schema) loaded.schema_path = config.schema_path;
      if (*opt_runs) loaded.runs = config.runs;
      if (*opt_fraction) loaded.train_fraction = config.train_fraction;
      if (*opt_folds) loaded.cv_folds = config.cv_folds;
      if (*opt_standardize) loaded.standardize = config.standardize;
      if (*opt_seed) loaded.master_seed = config.master_seed;
      if (*opt_threads) loaded.threads = config.threads;
      config = loaded;
    }
    if (*opt_counts) {
      synth.class_counts = synth_counts;
      config.synthetic = synth;
    } else if (config.synthetic) {
      if (*opt_dims) config.synthetic->dims = synth.dims;
      if (*opt_psep) config.synthetic->pair_separation = synth.pair_separation;
      if (*opt_gsep)
        config.synthetic->group_separation = synth.group_separation;
      if (*opt_sigma) config.synthetic->sigma = synth.sigma;
    }
    if (*opt_pairs) config.noise_pairs = parse_pairs(exp_pairs);
    if (*opt_levels) config.noise_levels = parse_rates(exp_levels);
    if (*opt_detectors) config.detectors = parse_learner_list(exp_detectors);
    if (*opt_finals) config.final_learners = parse_learner_list(exp_finals);
    if (no_single) config.single_filters = false;
    if (no_ensemble) config.ensemble_filters = false;
    if (no_voting) config.voting = false;

    const ExperimentReport report = run_experiment(config);
    emit_report(report, out_dir);
    std::cout << "report written to " << out_dir << "\n";
    return 0;
  }

  if (filter_cmd->parsed()) {
    const Dataset ds = load_dataset(filter_args.data, filter_args.schema);
    const auto detectors = parse_learner_list(filter_args.detectors);
    const TagMatrix tags = cv_tag(ds, detectors, filter_args.folds,
                                  filter_args.seed, filter_args.threads);
    const FilterPolicy policy = parse_policy(policy_text, detectors.size());
    const FilterResult result = apply_filter(tags, policy);
    save_dataset(subset(ds, result.kept), out_data);
    if (!out_discarded.empty()) {
      std::ostringstream ids;
      for (std::size_t t : result.discarded) ids << t << "\n";
      write_text_file(out_discarded, ids.str());
    }
    if (!out_tags.empty()) write_text_file(out_tags, tags.to_table());
    std::cout << "kept " << result.kept.size() << " of " << ds.size()
              << " instances (" << result.discarded.size() << " discarded)\n";
    return 0;
  }

  if (inject_cmd->parsed()) {
    const Dataset ds = load_dataset(inj_data, inj_schema);
    const NoiseSpec spec{parse_pairs(inj_pairs), inj_rate};
    const auto [corrupted, mask] = inject_noise(ds, spec, inj_seed);
    save_dataset(corrupted, inj_out_data);
    write_text_file(inj_out_mask, mask.to_table(corrupted));
    std::cout << "corrupted " << mask.size() << " of " << ds.size()
              << " instances (actual noise "
              << actual_noise_rate(mask, ds.size()) << ")\n";
    return 0;
  }

  if (tags_cmd->parsed()) {
    const Dataset ds = load_dataset(tags_args.data, tags_args.schema);
    const TagMatrix tags =
        cv_tag(ds, parse_learner_list(tags_args.detectors), tags_args.folds,
               tags_args.seed, tags_args.threads);
    write_text_file(tags_out, tags.to_table());
    std::cout << "tag matrix written to " << tags_out << "\n";
    return 0;
  }

  if (maj->parsed()) {
    std::printf("%.12g\n", analytic_majority_error(maj_m, maj_p));
    return 0;
  }
  if (ce1->parsed()) {
    std::printf("%.12g\n", analytic_consensus_e1(parse_rates(ce1_rates)));
    return 0;
  }
  if (ce2->parsed()) {
    std::printf("%.12g\n", analytic_consensus_e2(parse_rates(ce2_rates)));
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    nlohmann::json record;
    record["error"] = e.what();
    std::cerr << record.dump() << "\n";
    return 1;
  }
}
