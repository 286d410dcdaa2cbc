#include "culturenov/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "culturenov/corpus_io.hpp"
#include "culturenov/dataset.hpp"
#include "culturenov/distances.hpp"
#include "culturenov/error.hpp"
#include "culturenov/io.hpp"
#include "culturenov/stats.hpp"

namespace culturenov {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr std::string_view kMetricNames[] = {"newness", "uniqueness", "difference", "new_surprise",
                                             "divergent_surprise"};
constexpr std::string_view kControlNames[] = {"lexical_diversity", "new_ingredient_ratio",
                                              "length_ratio"};
const std::vector<std::string> kScoreHeader = {
    "product",      "kb_culture",         "variation_id",      "variation_culture",
    "appearance",   "disappearance",      "newness",           "uniqueness",
    "difference",   "new_surprise",       "divergent_surprise", "lexical_diversity",
    "new_ingredient_ratio", "length_ratio"};

std::string path_string(const fs::path& p) { return p.generic_string(); }

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

void require_path(const fs::path& p, std::string_view what) {
  if (p.empty()) throw Error(ErrorKind::InvalidArgument, std::string(what) + " path not configured");
}

Json rule_json(const ThresholdRule& rule) {
  if (rule.kind == ThresholdRule::Kind::Mean) return "mean";
  return Json{{"quantile", rule.quantile}};
}

// Run manifest shared by every command.
struct RunRecord {
  std::string command;
  std::vector<std::pair<std::string, fs::path>> inputs;
  std::vector<std::string> outputs;
  Json summary = Json::object();

  std::string render(const RunConfig& config) const {
    const auto config_text = config.to_json();
    Json j;
    j["command"] = command;
    j["tool_version"] = kToolVersion;
    j["config"] = Json::parse(config_text);
    j["config_sha256"] = io::sha256_hex(config_text);
    Json in = Json::array();
    for (const auto& [role, path] : inputs) {
      in.push_back({{"role", role}, {"path", path_string(path)}, {"sha256", io::sha256_hex(io::read_file(path))}});
    }
    j["inputs"] = std::move(in);
    j["outputs"] = outputs;
    j["summary"] = summary;
    return j.dump(2) + "\n";
  }
};

// Manifest produced by build and consumed by score.
struct SplitManifest {
  CorpusSplit split;
  std::map<std::string, std::string> variation_countries;
};

std::string render_manifest(const SplitManifest& m) {
  Json j;
  j["product"] = m.split.product;
  j["origin"] = m.split.origin;
  j["seed"] = m.split.holdout_seed;
  j["holdout_fraction"] = m.split.holdout_fraction;
  j["knowledge"] = m.split.knowledge;
  j["held_out"] = m.split.held_out;
  j["variations"] = m.split.variations;
  j["variation_countries"] = m.variation_countries;
  return j.dump(2) + "\n";
}

SplitManifest parse_manifest(const fs::path& path) {
  try {
    const auto j = Json::parse(io::read_file(path));
    SplitManifest m;
    m.split.product = j.at("product").get<std::string>();
    m.split.origin = j.at("origin").get<std::string>();
    m.split.holdout_seed = j.at("seed").get<std::uint64_t>();
    m.split.holdout_fraction = j.at("holdout_fraction").get<double>();
    m.split.knowledge = j.at("knowledge").get<std::vector<std::string>>();
    m.split.held_out = j.value("held_out", std::vector<std::string>{});
    m.split.variations = j.at("variations").get<std::vector<std::string>>();
    m.variation_countries = j.value("variation_countries", std::map<std::string, std::string>{});
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, path_string(path) + ": " + e.what());
  }
}

std::vector<fs::path> manifest_files(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::exists(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Runs fn(i) for i in [0, n) on `workers` threads.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (auto i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// ---- analysis ----

struct ScoreRow {
  std::string product;
  std::string kb_culture;
  std::string variation_id;
  std::string variation_culture;
  std::map<std::string, double, std::less<>> values;  // metrics and controls by column name
};

std::vector<ScoreRow> read_scores(const fs::path& path) {
  const auto text = io::read_file(path);
  const auto all = io::lines(text);
  if (all.empty()) throw Error(ErrorKind::ParseError, path_string(path) + ": missing header");
  const auto header = io::split_csv_line(all[0]);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const auto& name : kScoreHeader) {
    if (!col.count(name)) throw Error(ErrorKind::ParseError, path_string(path) + ": missing column " + name);
  }
  std::vector<ScoreRow> rows;
  for (std::size_t ln = 1; ln < all.size(); ++ln) {
    if (io::trim(all[ln]).empty()) continue;
    const auto f = io::split_csv_line(all[ln]);
    const auto where = path_string(path) + ":" + std::to_string(ln + 1);
    if (f.size() != header.size()) throw Error(ErrorKind::ParseError, where + ": wrong field count");
    ScoreRow r;
    r.product = f[col["product"]];
    r.kb_culture = f[col["kb_culture"]];
    r.variation_id = f[col["variation_id"]];
    r.variation_culture = f[col["variation_culture"]];
    for (std::size_t i = 4; i < kScoreHeader.size(); ++i) {
      const auto& cell = f[col[kScoreHeader[i]]];
      try {
        std::size_t used = 0;
        r.values[kScoreHeader[i]] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, where + ": bad number '" + cell + "'");
      }
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

struct DistanceSource {
  DistanceKind kind;
  DistanceMatrix matrix;
};

std::string fmt(double x) { return io::format_double(x); }
std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : std::string{}; }

std::vector<double> column(const std::vector<const ScoreRow*>& rows, std::string_view name) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto* r : rows) out.push_back(r->values.find(name)->second);
  return out;
}

std::string render_csv_as_markdown(std::string_view csv) {
  std::ostringstream out;
  const auto rows = io::lines(csv);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto f = io::split_csv_line(rows[i]);
    out << "|";
    for (const auto& cell : f) out << " " << cell << " |";
    out << "\n";
    if (i == 0) {
      out << "|";
      for (std::size_t k = 0; k < f.size(); ++k) out << " --- |";
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace

// ---- config ----

NoveltyConfig RunConfig::novelty() const {
  NoveltyConfig c;
  c.lambda1 = lambda1;
  c.lambda2 = lambda2;
  c.pmi_window = pmi_window;
  c.newness_rule = newness_rule;
  return c;
}

fs::path RunConfig::manifests_path() const {
  return manifests_dir.empty() ? out_dir / "manifests" : manifests_dir;
}

fs::path RunConfig::scores_path() const { return scores.empty() ? out_dir / "scores.csv" : scores; }

void RunConfig::validate() const {
  auto bad = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (!(lambda1 >= 0.0 && lambda2 >= 0.0) || std::abs(lambda1 + lambda2 - 1.0) > 1e-12) {
    bad("lambda1 and lambda2 must be non-negative and sum to 1");
  }
  if (pmi_window < 2) bad("pmi_window must be at least 2");
  if (!(rbo_p > 0.0 && rbo_p < 1.0)) bad("rbo_p must lie in (0, 1)");
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) bad("holdout_fraction must lie in [0, 1)");
  if (workers == 0) bad("workers must be at least 1");
  if (newness_rule.kind == ThresholdRule::Kind::Quantile &&
      !(newness_rule.quantile >= 0.0 && newness_rule.quantile <= 1.0)) {
    bad("newness threshold quantile must lie in [0, 1]");
  }
  if (out_dir.empty()) bad("out_dir must not be empty");
}

std::string RunConfig::to_json() const {
  Json j;
  j["lambda1"] = lambda1;
  j["lambda2"] = lambda2;
  j["pmi_window"] = pmi_window;
  j["newness_threshold"] = rule_json(newness_rule);
  j["rbo_p"] = rbo_p;
  j["holdout_fraction"] = holdout_fraction;
  j["seed"] = seed;
  j["provider"] = to_string(provider);
  j["n_boot"] = n_boot;
  j["robust_se"] = robust_se;
  j["corpus"] = path_string(corpus);
  j["dishes"] = path_string(dishes);
  j["registry"] = path_string(registry);
  j["distances"] = {{"iw", path_string(iw_distances)},
                    {"geo", path_string(geo_distances)},
                    {"linguistic", path_string(linguistic_distances)},
                    {"religious", path_string(religious_distances)}};
  j["out_dir"] = path_string(out_dir);
  j["manifests_dir"] = path_string(manifests_path());
  j["scores"] = path_string(scores_path());
  // `workers` is left out on purpose: it never changes an output byte.
  return j.dump(2);
}

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "config: expected a JSON object");

  static const std::vector<std::string> known = {
      "lambda1", "lambda2", "pmi_window", "newness_threshold", "rbo_p", "holdout_fraction",
      "seed", "provider", "workers", "n_boot", "robust_se", "corpus", "dishes", "registry",
      "distances", "out_dir", "manifests_dir", "scores"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorKind::InvalidArgument, "config: unknown key '" + key + "'");
    }
  }

  RunConfig c;
  try {
    const bool has1 = j.contains("lambda1");
    const bool has2 = j.contains("lambda2");
    if (has1) c.lambda1 = j["lambda1"].get<double>();
    if (has2) c.lambda2 = j["lambda2"].get<double>();
    if (has1 && !has2) c.lambda2 = 1.0 - c.lambda1;
    if (has2 && !has1) c.lambda1 = 1.0 - c.lambda2;
    c.pmi_window = j.value("pmi_window", c.pmi_window);
    if (auto it = j.find("newness_threshold"); it != j.end()) {
      if (it->is_string() && it->get<std::string>() == "mean") {
        c.newness_rule = ThresholdRule::mean();
      } else if (it->is_object() && it->contains("quantile")) {
        c.newness_rule = ThresholdRule::at_quantile(it->at("quantile").get<double>());
      } else {
        throw Error(ErrorKind::InvalidArgument, "config: newness_threshold must be \"mean\" or {\"quantile\": q}");
      }
    }
    c.rbo_p = j.value("rbo_p", c.rbo_p);
    c.holdout_fraction = j.value("holdout_fraction", c.holdout_fraction);
    c.seed = j.value("seed", c.seed);
    if (j.contains("provider")) c.provider = parse_provider(j["provider"].get<std::string>());
    c.workers = j.value("workers", c.workers);
    c.n_boot = j.value("n_boot", c.n_boot);
    c.robust_se = j.value("robust_se", c.robust_se);
    auto path_field = [&](const char* key, fs::path& dst) {
      if (j.contains(key)) dst = resolve(base_dir, j[key].get<std::string>());
    };
    path_field("corpus", c.corpus);
    path_field("dishes", c.dishes);
    path_field("registry", c.registry);
    path_field("out_dir", c.out_dir);
    path_field("manifests_dir", c.manifests_dir);
    path_field("scores", c.scores);
    if (auto it = j.find("distances"); it != j.end()) {
      for (const auto& [key, value] : it->items()) {
        const auto p = resolve(base_dir, value.get<std::string>());
        if (key == "iw") c.iw_distances = p;
        else if (key == "geo") c.geo_distances = p;
        else if (key == "linguistic") c.linguistic_distances = p;
        else if (key == "religious") c.religious_distances = p;
        else throw Error(ErrorKind::InvalidArgument, "config: unknown distance source '" + key + "'");
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  return parse_run_config(io::read_file(path), path.parent_path());
}

std::string slugify(std::string_view name) {
  std::string out;
  bool dash = false;
  for (unsigned char ch : name) {
    if (std::isalnum(ch)) {
      if (dash && !out.empty()) out.push_back('-');
      out.push_back(static_cast<char>(std::tolower(ch)));
      dash = false;
    } else {
      dash = true;
    }
  }
  return out.empty() ? "dish" : out;
}

std::uint64_t split_seed(std::uint64_t master, std::string_view dish, std::string_view origin) {
  // FNV-1a over "dish\0origin", mixed with the master seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto eat = [&](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (unsigned char c : dish) eat(c);
  eat(0);
  for (unsigned char c : origin) eat(c);
  return splitmix64(master ^ h);
}

// ---- build ----

BuildSummary cmd_build(const RunConfig& config, std::ostream& log) {
  config.validate();
  require_path(config.corpus, "corpus");
  require_path(config.dishes, "dishes");
  require_path(config.registry, "registry");

  // Read everything first so a bad input leaves no partial outputs.
  const auto registry = CountryRegistry::load(config.registry);
  const auto dishes = load_dish_specs(config.dishes);
  auto loaded = load_corpus_jsonl(config.corpus, config.provider);
  for (const auto& d : loaded.dropped) {
    log << "warning: dropped document " << d.id << " (line " << d.line << "): " << d.reason << "\n";
  }
  assign_countries(loaded.docs, registry);
  const std::span<const Document> corpus(loaded.docs);

  std::vector<std::pair<fs::path, std::string>> manifests;
  std::vector<std::string> report = {io::csv_row({"dish", "origin", "kb_size", "variation_count", "status"})};
  BuildSummary summary;
  for (const auto& dish : dishes) {
    const auto origins = dish_origins(corpus, dish);
    if (origins.empty()) {
      report.push_back(io::csv_row({dish.canonical_name, "", "0", "0", "no_matches"}));
      ++summary.ineligible;
      continue;
    }
    for (const auto& origin : origins) {
      const auto seed = split_seed(config.seed, dish.canonical_name, origin);
      SplitManifest m{plan_split(corpus, dish, origin, config.holdout_fraction, seed), {}};
      const bool ok = m.split.eligible();
      report.push_back(io::csv_row({dish.canonical_name, origin, std::to_string(m.split.knowledge.size()),
                                    std::to_string(m.split.variations.size()),
                                    ok ? "eligible" : "ineligible"}));
      if (!ok) {
        log << "warning: " << dish.canonical_name << "/" << origin << " is ineligible (knowledge "
            << m.split.knowledge.size() << ", variations " << m.split.variations.size() << ")\n";
        ++summary.ineligible;
        continue;
      }
      for (const auto& doc : corpus) {
        if (std::binary_search(m.split.variations.begin(), m.split.variations.end(), doc.id)) {
          m.variation_countries[doc.id] = effective_country(doc, dish).value_or("UNKNOWN");
        }
      }
      const auto name = slugify(dish.canonical_name) + "__" + origin + ".json";
      manifests.emplace_back(config.manifests_path() / name, render_manifest(m));
    }
  }
  summary.manifests = manifests.size();

  const auto dir = config.manifests_path();
  for (const auto& stale : manifest_files(dir)) fs::remove(stale);
  for (const auto& [path, text] : manifests) io::write_file_atomic(path, text);
  fs::create_directories(dir);
  const auto report_path = config.out_dir / "eligibility.csv";
  std::string report_text;
  for (const auto& line : report) report_text += line;
  io::write_file_atomic(report_path, report_text);

  RunRecord rec{"build", {{"corpus", config.corpus}, {"dishes", config.dishes}, {"registry", config.registry}}, {}, {}};
  for (const auto& [path, _] : manifests) rec.outputs.push_back(path_string(path));
  rec.outputs.push_back(path_string(report_path));
  rec.summary = {{"documents", loaded.docs.size()},
                 {"dropped_documents", loaded.dropped.size()},
                 {"manifests", summary.manifests},
                 {"ineligible", summary.ineligible}};
  io::write_file_atomic(config.out_dir / "run_build.json", rec.render(config));
  log << "build: " << summary.manifests << " manifests, " << summary.ineligible << " ineligible\n";
  return summary;
}

// ---- score ----

ScoreSummary cmd_score(const RunConfig& config, std::ostream& log) {
  config.validate();
  require_path(config.corpus, "corpus");
  const auto files = manifest_files(config.manifests_path());
  std::vector<SplitManifest> manifests;
  for (const auto& f : files) manifests.push_back(parse_manifest(f));

  const auto loaded = load_corpus_jsonl(config.corpus, config.provider);
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& d : loaded.docs) by_id.emplace(d.id, &d);
  std::unordered_map<std::string, std::string> dropped;
  for (const auto& d : loaded.dropped) dropped.emplace(d.id, d.reason);

  const auto novelty = config.novelty();
  std::vector<std::vector<std::vector<std::string>>> rows(manifests.size());
  std::vector<std::string> failures;
  std::mutex failures_mu;
  auto fail = [&](std::string msg) {
    std::lock_guard lock(failures_mu);
    failures.push_back(std::move(msg));
  };

  // Unknown ids are input errors, checked before any scoring starts.
  for (std::size_t i = 0; i < manifests.size(); ++i) {
    for (const auto* ids : {&manifests[i].split.knowledge, &manifests[i].split.variations}) {
      for (const auto& id : *ids) {
        if (!by_id.count(id) && !dropped.count(id)) {
          throw Error(ErrorKind::ParseError, path_string(files[i]) + ": unknown document id '" + id + "'");
        }
      }
    }
  }

  parallel_for(manifests.size(), config.workers, [&](std::size_t i) {
    const auto& m = manifests[i];
    const auto tag = m.split.product + "/" + m.split.origin;
    std::vector<Document> kb_docs;
    for (const auto& id : m.split.knowledge) {
      if (auto it = by_id.find(id); it != by_id.end()) kb_docs.push_back(*it->second);
    }
    std::optional<KnowledgeSpace> kb;
    try {
      kb = KnowledgeSpace::build(m.split.product, m.split.origin, std::move(kb_docs), novelty);
    } catch (const Error& e) {
      fail(tag + ": knowledge space: " + e.what());
      return;
    }
    for (const auto& id : m.split.variations) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        fail(tag + "/" + id + ": " + dropped.at(id));
        continue;
      }
      try {
        const auto s = score_all(*kb, *it->second, novelty);
        const auto c = control_variables(*it->second, *kb);
        auto country = m.variation_countries.count(id) ? m.variation_countries.at(id)
                                                       : it->second->country.value_or("UNKNOWN");
        rows[i].push_back({m.split.product, m.split.origin, id, std::move(country), fmt(s.appearance),
                           fmt(s.disappearance), fmt(s.newness), fmt(s.uniqueness), fmt(s.difference),
                           fmt(s.new_surprise), fmt(s.divergent_surprise), fmt(c.lexical_diversity),
                           fmt(c.new_ingredient_ratio), fmt(c.length_ratio)});
      } catch (const Error& e) {
        fail(tag + "/" + id + ": " + e.what());
      }
    }
  });

  std::vector<std::vector<std::string>> flat;
  for (auto& r : rows) std::move(r.begin(), r.end(), std::back_inserter(flat));
  std::sort(flat.begin(), flat.end(), [](const auto& a, const auto& b) {
    return std::tie(a[0], a[1], a[2]) < std::tie(b[0], b[1], b[2]);
  });
  std::string text = io::csv_row(kScoreHeader);
  for (const auto& r : flat) text += io::csv_row(r);
  io::write_file_atomic(config.scores_path(), text);

  std::sort(failures.begin(), failures.end());
  for (const auto& f : failures) log << "warning: skipped " << f << "\n";
  ScoreSummary summary{flat.size(), failures.size()};
  log << "score: " << summary.rows << " rows, " << summary.failed << " skipped\n";

  RunRecord rec{"score", {{"corpus", config.corpus}}, {path_string(config.scores_path())}, {}};
  for (const auto& f : files) rec.inputs.emplace_back("manifest", f);
  rec.summary = {{"manifests", manifests.size()}, {"rows", summary.rows}, {"skipped", summary.failed},
                 {"skipped_detail", failures}};
  io::write_file_atomic(config.out_dir / "run_score.json", rec.render(config));
  return summary;
}

// ---- analyze ----

AnalyzeSummary cmd_analyze(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto rows = read_scores(config.scores_path());
  RunRecord rec{"analyze", {{"scores", config.scores_path()}}, {}, {}};

  std::vector<DistanceSource> sources;
  std::optional<CountryRegistry> registry;
  if (!config.registry.empty()) {
    registry = CountryRegistry::load(config.registry);
    rec.inputs.emplace_back("registry", config.registry);
  }
  const std::pair<DistanceKind, const fs::path*> files[] = {
      {DistanceKind::Iw, &config.iw_distances},
      {DistanceKind::Geo, &config.geo_distances},
      {DistanceKind::Linguistic, &config.linguistic_distances},
      {DistanceKind::Religious, &config.religious_distances}};
  for (const auto& [kind, path] : files) {
    if (!path->empty()) {
      if (!registry) throw Error(ErrorKind::InvalidArgument, "distance files need a registry to validate ISO codes");
      sources.push_back({kind, load_distance_matrix(*path, kind, *registry)});
      rec.inputs.emplace_back(std::string(to_string(kind)) + "_distances", *path);
    } else if (registry && (kind == DistanceKind::Iw || kind == DistanceKind::Geo)) {
      auto m = registry_matrix(*registry, kind);
      if (m.size() > 0) sources.push_back({kind, std::move(m)});
    }
  }
  if (sources.empty()) throw Error(ErrorKind::InvalidArgument, "no distance source available");

  AnalyzeSummary summary;
  summary.rows = rows.size();
  const auto cov = config.robust_se ? stats::CovarianceType::HC1 : stats::CovarianceType::Classical;
  std::vector<std::string> warnings;

  // Metric-metric agreement.
  std::string corr = io::csv_row({"method", "metric_a", "metric_b", "coefficient", "p_value", "n"});
  std::vector<const ScoreRow*> all;
  for (const auto& r : rows) all.push_back(&r);
  std::map<std::pair<std::string, std::string>, std::vector<const ScoreRow*>> splits;
  for (const auto& r : rows) splits[{r.product, r.kb_culture}].push_back(&r);

  for (std::size_t a = 0; a < std::size(kMetricNames); ++a) {
    for (std::size_t b = a + 1; b < std::size(kMetricNames); ++b) {
      const std::string ma(kMetricNames[a]), mb(kMetricNames[b]);
      try {
        const auto c = stats::pearson(column(all, ma), column(all, mb));
        corr += io::csv_row({"pearson", ma, mb, fmt(c.coefficient), fmt(c.p_value), std::to_string(c.n)});
      } catch (const Error& e) {
        warnings.push_back("pearson " + ma + "/" + mb + ": " + e.what());
      }
      // Rankings are only comparable inside one (product, origin) split.
      double tau_sum = 0.0, p_sum = 0.0, rbo_sum = 0.0;
      std::size_t tau_n = 0, rbo_n = 0;
      for (const auto& [key, members] : splits) {
        const auto xa = column(members, ma);
        const auto xb = column(members, mb);
        try {
          const auto k = stats::kendall_tau(xa, xb);
          tau_sum += k.coefficient;
          p_sum += k.p_value;
          ++tau_n;
        } catch (const Error&) {
          // too few or fully tied variations in this split
        }
        auto ranking = [&](const std::vector<double>& v) {
          std::vector<std::size_t> idx(v.size());
          for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
          std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
            return v[x] != v[y] ? v[x] > v[y] : members[x]->variation_id < members[y]->variation_id;
          });
          std::vector<std::string> ids;
          for (auto i : idx) ids.push_back(members[i]->variation_id);
          return ids;
        };
        rbo_sum += stats::rbo(ranking(xa), ranking(xb), config.rbo_p);
        ++rbo_n;
      }
      if (tau_n > 0) {
        corr += io::csv_row({"kendall", ma, mb, fmt(tau_sum / static_cast<double>(tau_n)),
                             fmt(p_sum / static_cast<double>(tau_n)), std::to_string(tau_n)});
      }
      if (rbo_n > 0) {
        corr += io::csv_row({"rbo", ma, mb, fmt(rbo_sum / static_cast<double>(rbo_n)), "",
                             std::to_string(rbo_n)});
      }
    }
  }

  std::string md = io::csv_row({"distance", "metric", "coefficient", "p_value", "n"});
  std::string reg = io::csv_row({"distance", "term", "coefficient", "std_error", "t_stat", "p_value",
                                 "r_squared", "f_statistic", "f_p_value", "n_obs"});
  std::string marg = io::csv_row({"distance", "metric", "coefficient", "std_error", "p_value",
                                  "r_squared", "n_obs"});
  std::string med = io::csv_row({"distance", "treatment", "mediator", "effect", "estimate", "ci_low",
                                 "ci_high", "p_value", "n_obs", "n_boot_used"});

  for (const auto& src : sources) {
    const std::string dname(to_string(src.kind));
    std::vector<const ScoreRow*> kept;
    std::vector<double> dist;
    for (const auto& r : rows) {
      if (auto d = src.matrix.find(r.kb_culture, r.variation_culture)) {
        kept.push_back(&r);
        dist.push_back(*d);
      }
    }
    summary.dropped.emplace_back(dname, rows.size() - kept.size());
    if (rows.size() != kept.size()) {
      log << "analyze: " << dname << ": dropped " << rows.size() - kept.size()
          << " rows without a distance\n";
    }
    if (kept.empty()) {
      warnings.push_back(dname + ": no rows with a distance; tables left empty");
      continue;
    }

    for (auto metric : kMetricNames) {
      const std::string m(metric);
      try {
        const auto c = stats::pearson(column(kept, m), dist);
        md += io::csv_row({dname, m, fmt(c.coefficient), fmt(c.p_value), std::to_string(c.n)});
      } catch (const Error& e) {
        warnings.push_back(dname + " pearson " + m + ": " + e.what());
      }
    }

    const auto N = static_cast<Eigen::Index>(kept.size());
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(dist.data(), N);
    std::vector<std::string> names;
    Eigen::MatrixXd X(N, static_cast<Eigen::Index>(std::size(kMetricNames) + std::size(kControlNames)));
    Eigen::Index col = 0;
    for (auto group : {std::span<const std::string_view>(kMetricNames), std::span<const std::string_view>(kControlNames)}) {
      for (auto name : group) {
        const auto v = column(kept, name);
        X.col(col++) = Eigen::Map<const Eigen::VectorXd>(v.data(), N);
        names.emplace_back(name);
      }
    }
    try {
      const auto fit = stats::ols_with_intercept(X, y, names, cov);
      for (std::size_t t = 0; t < fit.terms.size(); ++t) {
        const auto i = static_cast<Eigen::Index>(t);
        reg += io::csv_row({dname, fit.terms[t], fmt(fit.coefficients(i)), fmt(fit.std_errors(i)),
                            fmt(fit.t_stats(i)), fmt(fit.p_values(i)), fmt(fit.r_squared),
                            fmt(fit.f_statistic), fmt(fit.f_p_value), std::to_string(fit.n_obs)});
      }
    } catch (const Error& e) {
      warnings.push_back(dname + " full regression: " + e.what());
    }

    for (std::size_t k = 0; k < std::size(kMetricNames); ++k) {
      const std::string m(kMetricNames[k]);
      try {
        const auto fit = stats::ols_with_intercept(X.col(static_cast<Eigen::Index>(k)), y, {m}, cov);
        marg += io::csv_row({dname, m, fmt(fit.coefficients(1)), fmt(fit.std_errors(1)), fmt(fit.p_values(1)),
                             fmt(fit.r_squared), std::to_string(fit.n_obs)});
      } catch (const Error& e) {
        warnings.push_back(dname + " marginal " + m + ": " + e.what());
      }
      const auto treatment = column(kept, m);
      for (auto control : kControlNames) {
        const std::string c(control);
        const auto mediator = column(kept, c);
        try {
          stats::MediationOptions opt;
          opt.n_boot = config.n_boot;
          opt.seed = config.seed;
          opt.workers = config.workers;
          const auto r = stats::mediate(treatment, mediator, dist, Eigen::MatrixXd(N, 0), opt);
          const std::pair<const char*, const stats::EffectEstimate*> effects[] = {
              {"total", &r.total}, {"acme", &r.acme}, {"ade", &r.ade}};
          for (const auto& [label, e] : effects) {
            med += io::csv_row({dname, m, c, label, fmt(e->estimate), fmt(e->ci_low), fmt(e->ci_high),
                                fmt(e->p_value), std::to_string(r.n_obs), std::to_string(r.n_boot_used)});
          }
        } catch (const Error& e) {
          warnings.push_back(dname + " mediation " + m + "/" + c + ": " + e.what());
        }
      }
    }
  }

  const std::pair<const char*, const std::string*> outputs[] = {
      {"correlations.csv", &corr}, {"metric_distance.csv", &md}, {"regression.csv", &reg},
      {"marginal.csv", &marg},     {"mediation.csv", &med}};
  for (const auto& [name, text] : outputs) {
    io::write_file_atomic(config.out_dir / name, *text);
    rec.outputs.push_back(path_string(config.out_dir / name));
  }
  for (const auto& w : warnings) log << "warning: " << w << "\n";

  Json dropped = Json::object();
  for (const auto& [k, v] : summary.dropped) dropped[k] = v;
  rec.summary = {{"rows", summary.rows}, {"dropped_missing_distance", dropped}, {"warnings", warnings}};
  io::write_file_atomic(config.out_dir / "run_analyze.json", rec.render(config));
  log << "analyze: " << summary.rows << " rows, " << sources.size() << " distance sources\n";
  return summary;
}

// ---- distances / report ----

void cmd_distances(const RunConfig& config, std::ostream& log) {
  config.validate();
  require_path(config.registry, "registry");
  const auto registry = CountryRegistry::load(config.registry);
  RunRecord rec{"distances", {{"registry", config.registry}}, {}, {}};
  for (auto kind : {DistanceKind::Iw, DistanceKind::Geo}) {
    const auto m = registry_matrix(registry, kind);
    const auto path = config.out_dir / "distances" / (std::string(to_string(kind)) + ".csv");
    io::write_file_atomic(path, m.to_csv());
    rec.outputs.push_back(path_string(path));
    rec.summary[std::string(to_string(kind))] = m.size();
    log << "distances: " << to_string(kind) << ": " << m.size() << " pairs\n";
  }
  io::write_file_atomic(config.out_dir / "run_distances.json", rec.render(config));
}

void cmd_report(const RunConfig& config, std::ostream& log) {
  config.validate();
  const std::pair<const char*, const char*> sections[] = {
      {"eligibility.csv", "Split eligibility"},
      {"correlations.csv", "Metric agreement"},
      {"metric_distance.csv", "Metric vs. cultural distance"},
      {"regression.csv", "Full regression"},
      {"marginal.csv", "Single-metric regressions"},
      {"mediation.csv", "Mediation"}};
  std::string out = "# Novelty analysis report\n\nTool version " + std::string(kToolVersion) + ".\n";
  std::size_t found = 0;
  for (const auto& [file, title] : sections) {
    const auto path = config.out_dir / file;
    if (!fs::exists(path)) continue;
    ++found;
    out += "\n## " + std::string(title) + "\n\n" + render_csv_as_markdown(io::read_file(path));
  }
  if (found == 0) throw Error(ErrorKind::Io, "no tables found under " + path_string(config.out_dir));
  io::write_file_atomic(config.out_dir / "report.md", out);
  log << "report: " << found << " tables\n";
}

}  // namespace culturenov
