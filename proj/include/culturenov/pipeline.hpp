#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "culturenov/annotate.hpp"
#include "culturenov/novelty.hpp"

namespace culturenov {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Everything a batch run depends on. Loaded from a JSON file, then
/// overridden by command-line flags.
struct RunConfig {
  double lambda1 = 0.8;
  double lambda2 = 0.2;
  int pmi_window = kDefaultPmiWindow;
  ThresholdRule newness_rule = ThresholdRule::mean();
  double rbo_p = 0.9;
  double holdout_fraction = 0.3;
  std::uint64_t seed = 0;
  AnnotationProvider provider = AnnotationProvider::Preannotated;
  std::size_t workers = 1;
  std::size_t n_boot = 1000;
  bool robust_se = false;

  std::filesystem::path corpus;
  std::filesystem::path dishes;
  std::filesystem::path registry;
  std::filesystem::path iw_distances;
  std::filesystem::path geo_distances;
  std::filesystem::path linguistic_distances;
  std::filesystem::path religious_distances;
  std::filesystem::path out_dir = "out";
  std::filesystem::path manifests_dir;  // empty = <out_dir>/manifests
  std::filesystem::path scores;         // empty = <out_dir>/scores.csv

  NoveltyConfig novelty() const;
  std::filesystem::path manifests_path() const;
  std::filesystem::path scores_path() const;
  /// Throws InvalidArgument on inconsistent values (lambdas not summing to 1, ...).
  void validate() const;
  /// Canonical JSON with every field, defaults included.
  std::string to_json() const;
};

/// Parses the config schema (see README). Relative paths are resolved against
/// `base_dir`. Unknown keys are rejected. Throws ParseError / InvalidArgument.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Lowercase ASCII slug used in manifest file names.
std::string slugify(std::string_view name);

/// Per-(dish, origin) shuffle seed derived from the master seed.
std::uint64_t split_seed(std::uint64_t master, std::string_view dish, std::string_view origin);

struct BuildSummary {
  std::size_t manifests = 0;
  std::size_t ineligible = 0;
};
/// Writes <out>/manifests/<dish>__<ISO>.json, <out>/eligibility.csv, <out>/run_build.json.
/// All inputs are read and validated before anything is written.
BuildSummary cmd_build(const RunConfig& config, std::ostream& log);

struct ScoreSummary {
  std::size_t rows = 0;
  std::size_t failed = 0;
};
/// Scores every variation of every manifest into <scores>, plus <out>/run_score.json.
ScoreSummary cmd_score(const RunConfig& config, std::ostream& log);

struct AnalyzeSummary {
  std::size_t rows = 0;
  std::vector<std::pair<std::string, std::size_t>> dropped;  // distance kind -> rows lacking it
};
/// Writes correlations.csv, metric_distance.csv, regression.csv, marginal.csv,
/// mediation.csv and run_analyze.json under <out>.
AnalyzeSummary cmd_analyze(const RunConfig& config, std::ostream& log);

/// Writes <out>/distances/iw.csv and geo.csv from the registry.
void cmd_distances(const RunConfig& config, std::ostream& log);

/// Bundles the analysis CSVs into <out>/report.md.
void cmd_report(const RunConfig& config, std::ostream& log);

}  // namespace culturenov
