#include "mislabel/experiment.hpp"

#include <algorithm>
#include <thread>

#include <json.hpp>

#include "mislabel/decision_tree.hpp"
#include "mislabel/rng.hpp"
#include "mislabel/stats.hpp"

namespace mislabel {

namespace {

std::vector<LearnerSpec> default_learners() {
  return {LearnerSpec::decision_tree(), LearnerSpec::nearest_neighbor(1),
          LearnerSpec::linear_machine()};
}

void validate_config(const ExperimentConfig& config) {
  if (config.runs < 1) throw Error("experiment needs at least one run");
  if (config.cv_folds < 2) throw Error("experiment needs at least two folds");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
    throw Error("train_fraction must lie in (0, 1)");
  if (config.noise_levels.empty()) throw Error("no noise levels given");
  for (double level : config.noise_levels) {
    if (!(level >= 0.0 && level <= 1.0))
      throw Error("noise levels must lie in [0, 1]");
  }
  if (config.data_path.empty() == !config.synthetic.has_value())
    throw Error("exactly one data source required: data/schema files or "
                "a synthetic spec");
  if (!config.data_path.empty() && config.schema_path.empty())
    throw Error("a data file requires a schema file");
}

std::vector<PolicyColumn> build_filters(const ExperimentConfig& config) {
  const std::size_t m = config.detectors.size();
  std::vector<PolicyColumn> filters;
  filters.push_back({"none", FilterPolicy::none()});
  if (config.single_filters) {
    for (std::size_t d = 0; d < m; ++d) {
      std::string name = "sf-" + learner_name(config.detectors[d]);
      for (const auto& existing : filters) {
        if (existing.name == name) name += "-" + std::to_string(d);
      }
      filters.push_back({name, FilterPolicy::single(d)});
    }
  }
  if (config.ensemble_filters) {
    filters.push_back({"mf", FilterPolicy::majority(m)});
    filters.push_back({"cf", FilterPolicy::consensus(m)});
  }
  return filters;
}

}  // namespace

void ExperimentConfig::apply_defaults() {
  if (detectors.empty()) detectors = default_learners();
  if (final_learners.empty()) final_learners = default_learners();
  if (standardize) {
    for (auto& spec : detectors) spec.standardize = true;
    for (auto& spec : final_learners) spec.standardize = true;
  }
}

int ExperimentReport::reference_learner() const {
  // Lowest-noise column of the unfiltered rows.
  std::size_t level0 = 0;
  for (std::size_t v = 1; v < config.noise_levels.size(); ++v) {
    if (config.noise_levels[v] < config.noise_levels[level0]) level0 = v;
  }
  int best = 0;
  double best_mean = -1.0;
  for (std::size_t l = 0; l < learner_names.size(); ++l) {
    const double m = mean(accuracy[l][0][level0]);
    if (m > best_mean) {
      best = static_cast<int>(l);
      best_mean = m;
    }
  }
  return best;
}

ExperimentReport run_experiment(const ExperimentConfig& config_in) {
  ExperimentConfig config = config_in;
  config.apply_defaults();
  validate_config(config);

  const Dataset ds =
      config.synthetic
          ? generate_synthetic(*config.synthetic,
                               seed::derive(config.master_seed, seed::kSynthetic))
          : load_dataset(config.data_path, config.schema_path);

  std::vector<std::pair<int, int>> pairs = config.noise_pairs;
  if (pairs.empty() && config.synthetic)
    pairs = synthetic_confusable_pairs(ds.class_count);
  bool any_noise = false;
  for (double level : config.noise_levels) any_noise |= level > 0.0;
  if (pairs.empty() && any_noise)
    throw Error("nonzero noise levels require class pairs");
  NoiseSpec{pairs, 0.0}.validate(ds.class_count);
  config.noise_pairs = pairs;

  ExperimentReport report;
  report.config = config;
  report.filters = build_filters(config);
  for (const auto& spec : config.final_learners)
    report.learner_names.push_back(learner_name(spec));
  report.class_names = ds.schema.label_column().categories;
  for (std::size_t l = 0; l < config.final_learners.size(); ++l) {
    if (config.final_learners[l].kind == LearnerKind::decision_tree &&
        report.tree_learner < 0)
      report.tree_learner = static_cast<int>(l);
  }

  const std::size_t n_learners = config.final_learners.size();
  const std::size_t n_filters = report.filters.size();
  const std::size_t n_levels = config.noise_levels.size();
  const std::size_t n_runs = static_cast<std::size_t>(config.runs);
  const std::size_t n_classes = static_cast<std::size_t>(ds.class_count);

  const auto runs_grid = [&] {
    return std::vector<std::vector<double>>(n_levels,
                                            std::vector<double>(n_runs, 0.0));
  };
  report.accuracy.assign(
      n_learners,
      std::vector<std::vector<std::vector<double>>>(n_filters, runs_grid()));
  report.actual_noise = runs_grid();
  report.corrupted_counts = runs_grid();
  report.discarded_counts.assign(n_filters, runs_grid());
  report.intersection_counts.assign(n_filters, runs_grid());
  if (report.tree_learner >= 0)
    report.tree_leaves.assign(n_filters, runs_grid());

  std::vector<int> voting_filters;
  if (config.voting) {
    for (std::size_t f = 0; f < n_filters; ++f) {
      const auto& name = report.filters[f].name;
      if (name == "none" || name == "mf" || name == "cf") {
        voting_filters.push_back(static_cast<int>(f));
        report.voting_filter_names.push_back(name);
      }
    }
    report.voting_accuracy.assign(voting_filters.size(), runs_grid());
  }

  // Class histograms are accumulated per run slot and reduced to means
  // after all workers finish, keeping the output independent of thread
  // scheduling.
  std::vector<std::vector<std::vector<double>>> hist_pre(
      n_levels, std::vector<std::vector<double>>(
                    n_runs, std::vector<double>(n_classes, 0.0)));
  std::vector<std::vector<std::vector<std::vector<double>>>> hist_post(
      n_filters, hist_pre);

  report.run_seeds.resize(n_runs);
  report.split_seeds.resize(n_runs);
  report.noise_seeds.assign(n_runs, std::vector<std::uint64_t>(n_levels, 0));
  report.tag_seeds.assign(n_runs, std::vector<std::uint64_t>(n_levels, 0));

  // Split sizes are a fixed function of N and the fraction.
  report.train_size = static_cast<std::size_t>(std::floor(
      config.train_fraction * static_cast<double>(ds.size()) + 0.5));
  report.test_size = ds.size() - report.train_size;

  const auto execute_run = [&](std::size_t run) {
    const std::uint64_t run_seed =
        seed::derive(config.master_seed, seed::kRun, run);
    const std::uint64_t split_seed = seed::derive(run_seed, seed::kSplit);
    report.run_seeds[run] = run_seed;
    report.split_seeds[run] = split_seed;

    const TrainTestSplit split =
        split_train_test(ds, config.train_fraction, split_seed);
    // The test side must stay bit-identical to the source data.
    for (std::size_t i = 0; i < split.test_indices.size(); ++i) {
      if (split.test.instances[i].label !=
          ds.instances[split.test_indices[i]].label)
        throw Error("test data was modified");
    }

    for (std::size_t v = 0; v < n_levels; ++v) {
      const double level = config.noise_levels[v];
      const std::uint64_t noise_seed =
          seed::derive(run_seed, seed::kNoise, v);
      const std::uint64_t tag_seed = seed::derive(run_seed, seed::kFolds, v);
      report.noise_seeds[run][v] = noise_seed;
      report.tag_seeds[run][v] = tag_seed;

      auto [corrupted, mask] =
          inject_noise(split.train, NoiseSpec{pairs, level}, noise_seed);
      report.actual_noise[v][run] =
          actual_noise_rate(mask, corrupted.size());
      report.corrupted_counts[v][run] = static_cast<double>(mask.size());
      for (const auto& inst : corrupted.instances)
        hist_pre[v][run][static_cast<std::size_t>(inst.label)] += 1.0;

      const TagMatrix tags =
          cv_tag(corrupted, config.detectors, config.cv_folds, tag_seed, 1);

      for (std::size_t f = 0; f < n_filters; ++f) {
        const auto with_context = [&](const std::string& what) {
          return Error("run " + std::to_string(run) + ", level " +
                       std::to_string(level) + ", filter " +
                       report.filters[f].name + ": " + what);
        };
        try {
          const FilterResult result =
              apply_filter(tags, report.filters[f].policy);
          report.discarded_counts[f][v][run] =
              static_cast<double>(result.discarded.size());
          double intersect = 0.0;
          for (std::size_t t : result.discarded) {
            if (mask.contains(t)) intersect += 1.0;
          }
          report.intersection_counts[f][v][run] = intersect;
          if (result.kept.empty())
            throw Error("filter discarded every training instance");
          const Dataset kept = subset(corrupted, result.kept);
          for (const auto& inst : kept.instances)
            hist_post[f][v][run][static_cast<std::size_t>(inst.label)] += 1.0;

          std::vector<ModelPtr> models(n_learners);
          for (std::size_t l = 0; l < n_learners; ++l) {
            const std::uint64_t train_seed = seed::derive(
                seed::derive(run_seed, seed::kFinalLearner, v), f, l);
            models[l] =
                train_learner(kept, config.final_learners[l], train_seed);
            report.accuracy[l][f][v][run] = accuracy(*models[l], split.test);
            if (static_cast<int>(l) == report.tree_learner) {
              const auto* tree =
                  dynamic_cast<const TreeModel*>(models[l].get());
              report.tree_leaves[f][v][run] =
                  static_cast<double>(tree->leaf_count());
            }
          }

          const auto vf = std::find(voting_filters.begin(),
                                    voting_filters.end(), static_cast<int>(f));
          if (vf != voting_filters.end()) {
            std::vector<const Model*> voters;
            for (const auto& model : models) voters.push_back(model.get());
            std::size_t hits = 0;
            for (const auto& inst : split.test.instances) {
              if (majority_vote_classify(voters, inst, ds.class_count) ==
                  inst.label)
                ++hits;
            }
            report.voting_accuracy[static_cast<std::size_t>(
                vf - voting_filters.begin())][v][run] =
                static_cast<double>(hits) /
                static_cast<double>(split.test.size());
          }
        } catch (const Error& e) {
          throw with_context(e.what());
        }
      }
    }
  };

  if (config.threads <= 1 || n_runs <= 1) {
    for (std::size_t run = 0; run < n_runs; ++run) execute_run(run);
  } else {
    const std::size_t n_workers = std::min<std::size_t>(
        static_cast<std::size_t>(config.threads), n_runs);
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(n_runs);
    for (std::size_t w = 0; w < n_workers; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t run = w; run < n_runs; run += n_workers) {
          try {
            execute_run(run);
          } catch (...) {
            errors[run] = std::current_exception();
          }
        }
      });
    }
    for (auto& worker : workers) worker.join();
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }

  // Reduce histograms to means over runs, in run order.
  report.class_hist_pre.assign(n_levels,
                               std::vector<double>(n_classes, 0.0));
  report.class_hist_post.assign(
      n_filters, std::vector<std::vector<double>>(
                     n_levels, std::vector<double>(n_classes, 0.0)));
  for (std::size_t v = 0; v < n_levels; ++v) {
    for (std::size_t run = 0; run < n_runs; ++run) {
      for (std::size_t c = 0; c < n_classes; ++c) {
        report.class_hist_pre[v][c] +=
            hist_pre[v][run][c] / static_cast<double>(n_runs);
        for (std::size_t f = 0; f < n_filters; ++f) {
          report.class_hist_post[f][v][c] +=
              hist_post[f][v][run][c] / static_cast<double>(n_runs);
        }
      }
    }
  }
  return report;
}

// --- configuration serialization -------------------------------------

namespace {

using nlohmann::json;

json learners_to_json(const std::vector<LearnerSpec>& specs) {
  json out = json::array();
  for (const auto& spec : specs) out.push_back(learner_name(spec));
  return out;
}

std::vector<LearnerSpec> learners_from_json(const json& j) {
  std::vector<LearnerSpec> out;
  for (const auto& name : j) out.push_back(parse_learner(name));
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig config;
  try {
    if (j.contains("data")) config.data_path = j["data"];
    if (j.contains("schema")) config.schema_path = j["schema"];
    if (j.contains("synthetic")) {
      const json& s = j["synthetic"];
      SyntheticSpec spec;
      spec.class_counts = s.at("class_counts").get<std::vector<std::size_t>>();
      if (s.contains("dims")) spec.dims = s["dims"];
      if (s.contains("pair_separation"))
        spec.pair_separation = s["pair_separation"];
      if (s.contains("group_separation"))
        spec.group_separation = s["group_separation"];
      if (s.contains("sigma")) spec.sigma = s["sigma"];
      config.synthetic = spec;
    }
    if (j.contains("pairs")) {
      if (j["pairs"].is_string()) {
        config.noise_pairs = parse_pairs(j["pairs"]);
      } else {
        for (const auto& pair : j["pairs"])
          config.noise_pairs.emplace_back(pair.at(0), pair.at(1));
      }
    }
    if (j.contains("levels"))
      config.noise_levels = j["levels"].get<std::vector<double>>();
    if (j.contains("runs")) config.runs = j["runs"];
    if (j.contains("train_fraction"))
      config.train_fraction = j["train_fraction"];
    if (j.contains("folds")) config.cv_folds = j["folds"];
    if (j.contains("detectors"))
      config.detectors = learners_from_json(j["detectors"]);
    if (j.contains("final_learners"))
      config.final_learners = learners_from_json(j["final_learners"]);
    if (j.contains("single_filters"))
      config.single_filters = j["single_filters"];
    if (j.contains("ensemble_filters"))
      config.ensemble_filters = j["ensemble_filters"];
    if (j.contains("voting")) config.voting = j["voting"];
    if (j.contains("standardize")) config.standardize = j["standardize"];
    if (j.contains("seed")) config.master_seed = j["seed"];
    if (j.contains("threads")) config.threads = j["threads"];
  } catch (const json::exception& e) {
    throw Error(std::string("config field error: ") + e.what());
  }
  return config;
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  if (!data_path.empty()) j["data"] = data_path;
  if (!schema_path.empty()) j["schema"] = schema_path;
  if (synthetic) {
    j["synthetic"] = {{"class_counts", synthetic->class_counts},
                      {"dims", synthetic->dims},
                      {"pair_separation", synthetic->pair_separation},
                      {"group_separation", synthetic->group_separation},
                      {"sigma", synthetic->sigma}};
  }
  json pairs = json::array();
  for (const auto& [a, b] : noise_pairs) pairs.push_back({a, b});
  j["pairs"] = pairs;
  j["levels"] = noise_levels;
  j["runs"] = runs;
  j["train_fraction"] = train_fraction;
  j["folds"] = cv_folds;
  j["detectors"] = learners_to_json(detectors);
  j["final_learners"] = learners_to_json(final_learners);
  j["single_filters"] = single_filters;
  j["ensemble_filters"] = ensemble_filters;
  j["voting"] = voting;
  j["standardize"] = standardize;
  j["seed"] = master_seed;
  j["threads"] = threads;
  return j.dump(2) + "\n";
}

}  // namespace mislabel
