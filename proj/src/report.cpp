#include <cstdio>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "mislabel/analysis.hpp"
#include "mislabel/experiment.hpp"

namespace mislabel {

namespace {

using nlohmann::json;

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// Percent with one decimal, as the tables print accuracies.
std::string pct(double v) { return fmt("%.1f", v * 100.0); }
std::string pct_pm(const std::vector<double>& runs) {
  return pct(mean(runs)) + " \xc2\xb1 " + pct(sample_sd(runs));
}
// Nominal noise level column header (rate as a percentage).
std::string level_header(double level) { return fmt("%g", level * 100.0); }

std::string series_filename(const ExperimentReport& report, int learner,
                            int filter) {
  return "series_accuracy_" + report.learner_names[static_cast<std::size_t>(
                                  learner)] +
         "_" + report.filters[static_cast<std::size_t>(filter)].name + ".tsv";
}

}  // namespace

std::string render_accuracy_table(const ExperimentReport& report) {
  std::ostringstream out;
  out << "learner\tfilter";
  for (double level : report.config.noise_levels)
    out << "\t" << level_header(level);
  out << "\n";
  if (!report.actual_noise.empty()) {
    out << "actual_noise\t";
    for (const auto& runs : report.actual_noise)
      out << "\t" << pct(mean(runs));
    out << "\n";
  }
  for (std::size_t l = 0; l < report.learner_names.size(); ++l) {
    for (std::size_t f = 0; f < report.filters.size(); ++f) {
      out << report.learner_names[l] << "\t" << report.filters[f].name;
      for (std::size_t v = 0; v < report.config.noise_levels.size(); ++v)
        out << "\t" << pct_pm(report.accuracy[l][f][v]);
      out << "\n";
    }
  }
  return out.str();
}

std::string render_pvalue_table(const ExperimentReport& report) {
  // Paired t-test of each filter against no filtering. Note the caveat
  // that paired t-tests over overlapping random splits have an elevated
  // Type I error; the values are reported as-is.
  std::ostringstream out;
  out << "learner\tfilter";
  for (double level : report.config.noise_levels)
    out << "\t" << level_header(level);
  out << "\n";
  if (report.config.runs < 2) return out.str();
  for (std::size_t l = 0; l < report.learner_names.size(); ++l) {
    for (std::size_t f = 1; f < report.filters.size(); ++f) {
      out << report.learner_names[l] << "\t" << report.filters[f].name;
      for (std::size_t v = 0; v < report.config.noise_levels.size(); ++v) {
        const double p =
            paired_t_test(report.accuracy[l][f][v], report.accuracy[l][0][v]);
        out << "\t" << fmt("%.3f", p);
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string render_tree_size_table(const ExperimentReport& report) {
  std::ostringstream out;
  out << "noise_level";
  if (report.tree_learner >= 0) {
    for (const auto& filter : report.filters) out << "\t" << filter.name;
  }
  out << "\n";
  if (report.tree_learner < 0) return out.str();
  for (std::size_t v = 0; v < report.config.noise_levels.size(); ++v) {
    out << level_header(report.config.noise_levels[v]);
    for (std::size_t f = 0; f < report.filters.size(); ++f)
      out << "\t" << fmt("%.1f", mean(report.tree_leaves[f][v]));
    out << "\n";
  }
  return out.str();
}

std::string render_voting_table(const ExperimentReport& report) {
  std::ostringstream out;
  if (report.voting_filter_names.empty()) {
    out << "noise_level\n";
    return out.str();
  }
  const int ref = report.reference_learner();
  const auto& ref_name =
      report.learner_names[static_cast<std::size_t>(ref)];
  // Locate the reference learner's accuracy under each voting filter.
  std::vector<std::size_t> filter_index;
  for (const auto& name : report.voting_filter_names) {
    for (std::size_t f = 0; f < report.filters.size(); ++f) {
      if (report.filters[f].name == name) filter_index.push_back(f);
    }
  }
  out << "noise_level";
  for (const auto& name : report.voting_filter_names)
    out << "\t" << name << ":maj\t" << name << ":" << ref_name << "\t"
        << name << ":p";
  out << "\n";
  for (std::size_t v = 0; v < report.config.noise_levels.size(); ++v) {
    out << level_header(report.config.noise_levels[v]);
    for (std::size_t i = 0; i < filter_index.size(); ++i) {
      const auto& maj = report.voting_accuracy[i][v];
      const auto& single =
          report.accuracy[static_cast<std::size_t>(ref)][filter_index[i]][v];
      out << "\t" << pct(mean(maj)) << "\t" << pct(mean(single));
      if (report.config.runs >= 2) {
        out << "\t" << fmt("%.3f", paired_t_test(maj, single));
      } else {
        out << "\t";
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string render_precision_counts_table(const ExperimentReport& report) {
  std::ostringstream out;
  out << "noise_level";
  for (std::size_t f = 1; f < report.filters.size(); ++f)
    out << "\tD_" << report.filters[f].name;
  out << "\tM";
  for (std::size_t f = 1; f < report.filters.size(); ++f)
    out << "\tI_" << report.filters[f].name;
  out << "\n";
  for (std::size_t v = 0; v < report.config.noise_levels.size(); ++v) {
    out << level_header(report.config.noise_levels[v]);
    for (std::size_t f = 1; f < report.filters.size(); ++f)
      out << "\t" << fmt("%.1f", mean(report.discarded_counts[f][v]));
    out << "\t" << fmt("%.1f", mean(report.corrupted_counts[v]));
    for (std::size_t f = 1; f < report.filters.size(); ++f)
      out << "\t" << fmt("%.1f", mean(report.intersection_counts[f][v]));
    out << "\n";
  }
  return out.str();
}

std::string render_precision_rates_table(const ExperimentReport& report) {
  std::ostringstream out;
  out << "noise_level";
  for (std::size_t f = 1; f < report.filters.size(); ++f)
    out << "\tP(E1)_" << report.filters[f].name << "\tP(E2)_"
        << report.filters[f].name;
  out << "\n";
  for (std::size_t v = 0; v < report.config.noise_levels.size(); ++v) {
    out << level_header(report.config.noise_levels[v]);
    const double corrupted = mean(report.corrupted_counts[v]);
    const double total = static_cast<double>(report.train_size);
    for (std::size_t f = 1; f < report.filters.size(); ++f) {
      if (corrupted >= total) {  // P(E1) undefined: no good data exists
        out << "\tnan\tnan";
        continue;
      }
      const auto [p_e1, p_e2] = precision_estimates(
          mean(report.discarded_counts[f][v]), corrupted,
          mean(report.intersection_counts[f][v]), total);
      out << "\t" << fmt("%.2f", p_e1) << "\t" << fmt("%.2f", p_e2);
    }
    out << "\n";
  }
  return out.str();
}

std::string render_class_distribution_table(const ExperimentReport& report) {
  std::ostringstream out;
  out << "noise_level\tfilter";
  for (const auto& name : report.class_names) out << "\t" << name;
  out << "\n";
  for (std::size_t v = 0; v < report.config.noise_levels.size(); ++v) {
    out << level_header(report.config.noise_levels[v]) << "\toriginal";
    for (double count : report.class_hist_pre[v])
      out << "\t" << fmt("%.1f", count);
    out << "\n";
    for (std::size_t f = 0; f < report.filters.size(); ++f) {
      if (report.filters[f].name == "none") continue;
      out << level_header(report.config.noise_levels[v]) << "\t"
          << report.filters[f].name;
      for (double count : report.class_hist_post[f][v])
        out << "\t" << fmt("%.1f", count);
      out << "\n";
    }
  }
  return out.str();
}

std::string render_series(const ExperimentReport& report, int learner,
                          int filter) {
  std::ostringstream out;
  out << "noise_level\tactual_noise\tmean_accuracy\tsd\n";
  const auto l = static_cast<std::size_t>(learner);
  const auto f = static_cast<std::size_t>(filter);
  for (std::size_t v = 0; v < report.config.noise_levels.size(); ++v) {
    out << fmt("%g", report.config.noise_levels[v]) << "\t"
        << fmt("%.6f", mean(report.actual_noise[v])) << "\t"
        << fmt("%.6f", mean(report.accuracy[l][f][v])) << "\t"
        << fmt("%.6f", sample_sd(report.accuracy[l][f][v])) << "\n";
  }
  return out.str();
}

std::string report_to_json_text(const ExperimentReport& report) {
  json j;
  j["config"] = json::parse(report.config.to_json_text());
  j["train_size"] = report.train_size;
  j["test_size"] = report.test_size;
  j["class_names"] = report.class_names;
  j["learners"] = report.learner_names;
  json filters = json::array();
  for (const auto& filter : report.filters) filters.push_back(filter.name);
  j["filters"] = filters;
  j["levels"] = report.config.noise_levels;

  const auto stats_of = [](const std::vector<std::vector<double>>& grid) {
    json out;
    out["per_run"] = grid;
    json means = json::array(), sds = json::array();
    for (const auto& runs : grid) {
      means.push_back(mean(runs));
      sds.push_back(sample_sd(runs));
    }
    out["mean"] = means;
    out["sd"] = sds;
    return out;
  };

  j["actual_noise"] = stats_of(report.actual_noise);
  json accuracy;
  for (std::size_t l = 0; l < report.learner_names.size(); ++l) {
    json per_filter;
    for (std::size_t f = 0; f < report.filters.size(); ++f)
      per_filter[report.filters[f].name] = stats_of(report.accuracy[l][f]);
    accuracy[report.learner_names[l]] = per_filter;
  }
  j["accuracy"] = accuracy;

  if (report.config.runs >= 2) {
    json pvalues;
    for (std::size_t l = 0; l < report.learner_names.size(); ++l) {
      json per_filter;
      for (std::size_t f = 1; f < report.filters.size(); ++f) {
        json row = json::array();
        for (std::size_t v = 0; v < report.config.noise_levels.size(); ++v)
          row.push_back(paired_t_test(report.accuracy[l][f][v],
                                      report.accuracy[l][0][v]));
        per_filter[report.filters[f].name] = row;
      }
      pvalues[report.learner_names[l]] = per_filter;
    }
    j["p_values_vs_none"] = pvalues;
  }

  if (report.tree_learner >= 0) {
    json leaves;
    for (std::size_t f = 0; f < report.filters.size(); ++f)
      leaves[report.filters[f].name] = stats_of(report.tree_leaves[f]);
    j["tree_leaves"] = leaves;
  }

  json precision;
  precision["corrupted"] = stats_of(report.corrupted_counts);
  for (std::size_t f = 1; f < report.filters.size(); ++f) {
    json entry;
    entry["discarded"] = stats_of(report.discarded_counts[f]);
    entry["intersection"] = stats_of(report.intersection_counts[f]);
    json e1 = json::array(), e2 = json::array();
    for (std::size_t v = 0; v < report.config.noise_levels.size(); ++v) {
      const double corrupted = mean(report.corrupted_counts[v]);
      if (corrupted >= static_cast<double>(report.train_size)) {
        e1.push_back(nullptr);
        e2.push_back(nullptr);
        continue;
      }
      const auto [p_e1, p_e2] = precision_estimates(
          mean(report.discarded_counts[f][v]), corrupted,
          mean(report.intersection_counts[f][v]),
          static_cast<double>(report.train_size));
      e1.push_back(p_e1);
      e2.push_back(p_e2);
    }
    entry["p_e1"] = e1;
    entry["p_e2"] = e2;
    precision[report.filters[f].name] = entry;
  }
  j["precision"] = precision;

  if (!report.voting_filter_names.empty()) {
    json voting;
    voting["reference_learner"] =
        report.learner_names[static_cast<std::size_t>(
            report.reference_learner())];
    for (std::size_t i = 0; i < report.voting_filter_names.size(); ++i)
      voting[report.voting_filter_names[i]] =
          stats_of(report.voting_accuracy[i]);
    j["voting"] = voting;
  }

  json hist;
  hist["classes"] = report.class_names;
  hist["pre_filter"] = report.class_hist_pre;
  json post;
  for (std::size_t f = 0; f < report.filters.size(); ++f)
    post[report.filters[f].name] = report.class_hist_post[f];
  hist["post_filter"] = post;
  j["class_distribution"] = hist;

  json seeds;
  seeds["master"] = report.config.master_seed;
  seeds["run"] = report.run_seeds;
  seeds["split"] = report.split_seeds;
  seeds["noise"] = report.noise_seeds;
  seeds["tags"] = report.tag_seeds;
  j["seeds"] = seeds;

  return j.dump(2) + "\n";
}

void emit_report(const ExperimentReport& report, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto path = [&](const std::string& name) {
    return (std::filesystem::path(out_dir) / name).string();
  };
  write_text_file(path("report.json"), report_to_json_text(report));
  write_text_file(path("table_accuracy.tsv"), render_accuracy_table(report));
  write_text_file(path("table_pvalues.tsv"), render_pvalue_table(report));
  write_text_file(path("table_tree_size.tsv"),
                  render_tree_size_table(report));
  write_text_file(path("table_voting.tsv"), render_voting_table(report));
  write_text_file(path("table_precision_counts.tsv"),
                  render_precision_counts_table(report));
  write_text_file(path("table_precision_rates.tsv"),
                  render_precision_rates_table(report));
  write_text_file(path("table_class_distribution.tsv"),
                  render_class_distribution_table(report));
  for (std::size_t l = 0; l < report.learner_names.size(); ++l) {
    for (std::size_t f = 0; f < report.filters.size(); ++f) {
      write_text_file(
          path(series_filename(report, static_cast<int>(l),
                               static_cast<int>(f))),
          render_series(report, static_cast<int>(l), static_cast<int>(f)));
    }
  }
}

}  // namespace mislabel
