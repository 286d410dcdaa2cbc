// Batch front end: build -> score -> analyze, plus distances and report.
#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "culturenov/error.hpp"
#include "culturenov/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInput = 2, kInternal = 3 };

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> provider;
  std::optional<double> rbo_p;
  std::optional<double> lambda1;
  std::optional<int> window;
  std::optional<double> holdout;
  std::optional<std::size_t> n_boot;
  std::optional<std::string> out_dir;
  bool robust = false;
};

culturenov::RunConfig make_config(const Overrides& o) {
  auto c = o.config.empty() ? culturenov::RunConfig{} : culturenov::load_run_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (o.provider) c.provider = culturenov::parse_provider(*o.provider);
  if (o.rbo_p) c.rbo_p = *o.rbo_p;
  if (o.lambda1) {
    c.lambda1 = *o.lambda1;
    c.lambda2 = 1.0 - *o.lambda1;
  }
  if (o.window) c.pmi_window = *o.window;
  if (o.holdout) c.holdout_fraction = *o.holdout;
  if (o.n_boot) c.n_boot = *o.n_boot;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.robust) c.robust_se = true;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cultural novelty scoring and analysis"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config, "JSON run configuration");
  app.add_option("--seed", o.seed, "Master seed for splits and bootstrap");
  app.add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--provider", o.provider, "Annotation provider: preannotated | naive");
  app.add_option("--rbo-p", o.rbo_p, "RBO persistence in (0, 1)");
  app.add_option("--lambda1", o.lambda1, "Appearance weight; disappearance gets 1 - lambda1");
  app.add_option("--window", o.window, "PMI co-occurrence window");
  app.add_option("--holdout", o.holdout, "Share of origin recipes held out as variations");
  app.add_option("--n-boot", o.n_boot, "Bootstrap replicates for mediation");
  app.add_option("--out", o.out_dir, "Output directory");
  app.add_flag("--robust", o.robust, "HC1 standard errors in regressions");

  auto* build = app.add_subcommand("build", "Split dishes into knowledge spaces and variations");
  auto* score = app.add_subcommand("score", "Score every variation against its knowledge space");
  auto* analyze = app.add_subcommand("analyze", "Correlate scores with cultural distances");
  auto* distances = app.add_subcommand("distances", "Precompute IW and geographic distance matrices");
  auto* report = app.add_subcommand("report", "Bundle analysis tables into report.md");
  for (auto* sub : {build, score, analyze, distances, report}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    const auto config = make_config(o);
    if (build->parsed()) culturenov::cmd_build(config, std::cerr);
    else if (score->parsed()) culturenov::cmd_score(config, std::cerr);
    else if (analyze->parsed()) culturenov::cmd_analyze(config, std::cerr);
    else if (distances->parsed()) culturenov::cmd_distances(config, std::cerr);
    else if (report->parsed()) culturenov::cmd_report(config, std::cerr);
    return kOk;
  } catch (const culturenov::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
