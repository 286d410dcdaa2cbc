#include "culturenov/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "culturenov/error.hpp"
#include "culturenov/io.hpp"

namespace culturenov {
namespace {

using Json = nlohmann::json;

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool word_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

bool boundary_at(std::string_view s, std::size_t pos) {
  return pos >= s.size() || !word_byte(static_cast<unsigned char>(s[pos]));
}

}  // namespace

std::vector<DishSpec> parse_dish_specs(std::string_view json_text) {
  std::vector<DishSpec> out;
  try {
    const auto doc = Json::parse(json_text);
    if (!doc.is_array()) throw Error(ErrorKind::ParseError, "dish specs must be a JSON array");
    for (const auto& item : doc) {
      DishSpec d;
      d.canonical_name = item.at("name").get<std::string>();
      if (d.canonical_name.empty()) throw Error(ErrorKind::ParseError, "dish with empty name");
      d.aliases = item.value("aliases", std::vector<std::string>{});
      if (std::find(d.aliases.begin(), d.aliases.end(), d.canonical_name) == d.aliases.end()) {
        d.aliases.insert(d.aliases.begin(), d.canonical_name);
      }
      d.excluded_patterns = item.value("exclude", std::vector<std::string>{});
      d.origins = item.value("origins", std::vector<std::string>{});
      for (auto& o : d.origins) o = io::trim(o);
      if (auto it = item.find("overrides"); it != item.end()) {
        for (const auto& o : *it) {
          d.overrides.push_back({o.at("title_pattern").get<std::string>(), o.at("country").get<std::string>()});
        }
      }
      out.push_back(std::move(d));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("dish specs: ") + e.what());
  }
  std::set<std::string> names;
  for (const auto& d : out) {
    if (!names.insert(d.canonical_name).second) {
      throw Error(ErrorKind::ParseError, "duplicate dish '" + d.canonical_name + "'");
    }
  }
  return out;
}

std::vector<DishSpec> load_dish_specs(const std::filesystem::path& path) {
  try {
    return parse_dish_specs(io::read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

bool contains_whole_word(std::string_view haystack, std::string_view needle, bool allow_plural) {
  const auto h = lower(haystack);
  const auto n = lower(io::trim(needle));
  if (n.empty()) return false;
  for (auto pos = h.find(n); pos != std::string::npos; pos = h.find(n, pos + 1)) {
    if (pos > 0 && word_byte(static_cast<unsigned char>(h[pos - 1]))) continue;
    const auto end = pos + n.size();
    if (boundary_at(h, end)) return true;
    if (allow_plural) {
      if (h.compare(end, 1, "s") == 0 && boundary_at(h, end + 1)) return true;
      if (h.compare(end, 2, "es") == 0 && boundary_at(h, end + 2)) return true;
    }
  }
  return false;
}

std::optional<std::string> detect_country(std::string_view title,
                                          const CountryRegistry& registry) {
  std::optional<std::string> best;
  std::size_t best_len = 0;
  for (const auto& rec : registry.records()) {  // sorted by iso, so first wins ties
    auto consider = [&](const std::string& form) {
      if (form.size() > best_len && contains_whole_word(title, form)) {
        best = rec.iso;
        best_len = form.size();
      }
    };
    consider(rec.name);
    for (const auto& d : rec.demonyms) consider(d);
  }
  return best;
}

bool match_dish(std::string_view title, const DishSpec& dish) {
  for (const auto& ex : dish.excluded_patterns) {
    if (contains_whole_word(title, ex, true)) return false;
  }
  return std::any_of(dish.aliases.begin(), dish.aliases.end(),
                     [&](const std::string& a) { return contains_whole_word(title, a, true); });
}

std::optional<std::string> effective_country(const Document& doc, const DishSpec& dish) {
  for (const auto& o : dish.overrides) {
    if (contains_whole_word(doc.title, o.title_pattern)) return o.country;
  }
  return doc.country;
}

void assign_countries(std::span<Document> corpus, const CountryRegistry& registry) {
  for (auto& doc : corpus) {
    if (!doc.country) doc.country = detect_country(doc.title, registry);
  }
}

CorpusSplit plan_split(std::span<const Document> corpus, const DishSpec& dish,
                       const std::string& origin, double holdout_fraction, std::uint64_t seed) {
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "hold-out fraction must lie in [0, 1)");
  }
  CorpusSplit split;
  split.product = dish.canonical_name;
  split.origin = origin;
  split.holdout_seed = seed;
  split.holdout_fraction = holdout_fraction;

  std::vector<std::string> origin_ids;
  for (const auto& doc : corpus) {
    if (!match_dish(doc.title, dish)) continue;
    const auto country = effective_country(doc, dish);
    if (!country) continue;
    if (*country == origin) {
      origin_ids.push_back(doc.id);
    } else {
      split.variations.push_back(doc.id);
    }
  }
  // Shuffle from a canonical order so corpus order cannot leak into the split.
  std::sort(origin_ids.begin(), origin_ids.end());
  std::mt19937_64 rng(seed);
  std::shuffle(origin_ids.begin(), origin_ids.end(), rng);
  const auto n_hold = static_cast<std::size_t>(
      std::floor(holdout_fraction * static_cast<double>(origin_ids.size())));

  split.held_out.assign(origin_ids.begin(), origin_ids.begin() + static_cast<std::ptrdiff_t>(n_hold));
  split.knowledge.assign(origin_ids.begin() + static_cast<std::ptrdiff_t>(n_hold), origin_ids.end());
  split.variations.insert(split.variations.end(), split.held_out.begin(), split.held_out.end());
  std::sort(split.held_out.begin(), split.held_out.end());
  std::sort(split.knowledge.begin(), split.knowledge.end());
  std::sort(split.variations.begin(), split.variations.end());
  return split;
}

CorpusSplit build_split(std::span<const Document> corpus, const DishSpec& dish,
                        const std::string& origin, double holdout_fraction, std::uint64_t seed) {
  auto split = plan_split(corpus, dish, origin, holdout_fraction, seed);
  if (!split.eligible()) {
    throw Error(ErrorKind::IneligibleDish,
                dish.canonical_name + "/" + origin + ": knowledge " +
                    std::to_string(split.knowledge.size()) + ", variations " +
                    std::to_string(split.variations.size()) + " (need >= 2 each)");
  }
  return split;
}

std::vector<std::string> dish_origins(std::span<const Document> corpus, const DishSpec& dish) {
  if (!dish.origins.empty()) return dish.origins;
  std::map<std::string, int> counts;
  for (const auto& doc : corpus) {
    if (!match_dish(doc.title, dish)) continue;
    if (auto c = effective_country(doc, dish)) ++counts[*c];
  }
  if (counts.empty()) return {};
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return {best->first};
}

double modularity(const Eigen::MatrixXd& weights, std::span<const int> labels) {
  const auto n = weights.rows();
  if (weights.cols() != n || static_cast<Eigen::Index>(labels.size()) != n) {
    throw Error(ErrorKind::InvalidArgument, "modularity: shape mismatch");
  }
  const Eigen::VectorXd degree = weights.rowwise().sum();
  const double two_m = degree.sum();
  if (two_m <= 0.0) return 0.0;

  std::map<int, std::pair<double, double>> per_label;  // internal (both directions), degree
  for (Eigen::Index i = 0; i < n; ++i) {
    per_label[labels[i]].second += degree(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (labels[i] == labels[j]) per_label[labels[i]].first += weights(i, j);
    }
  }
  double q = 0.0;
  for (const auto& [label, acc] : per_label) {
    const double frac = acc.second / two_m;
    q += acc.first / two_m - frac * frac;
  }
  return q;
}

std::vector<int> greedy_modularity_labels(const Eigen::MatrixXd& weights,
                                          std::span<const std::string> node_names) {
  const auto n = static_cast<std::size_t>(weights.rows());
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i);
  const double two_m = weights.sum();
  if (n < 2 || two_m <= 0.0) return labels;

  // Community state: between-community weight and total degree, both / 2m.
  std::vector<bool> alive(n, true);
  Eigen::MatrixXd e = weights / two_m;
  Eigen::VectorXd a = e.rowwise().sum();
  std::vector<std::string> tag(node_names.begin(), node_names.end());  // smallest member name

  constexpr double kTie = 1e-12;
  for (;;) {
    double best_dq = 0.0;
    std::size_t bi = n, bj = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!alive[j] || e(i, j) <= 0.0) continue;
        const double dq = 2.0 * (e(i, j) - a(i) * a(j));
        if (dq <= kTie) continue;
        bool better = bi == n || dq > best_dq + kTie;
        if (!better && std::abs(dq - best_dq) <= kTie) {
          const auto cand = std::minmax(tag[i], tag[j]);
          const auto cur = std::minmax(tag[bi], tag[bj]);
          better = cand < cur;
        }
        if (better) {
          best_dq = dq;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == n) break;
    // Merge bj into bi.
    e.row(bi) += e.row(bj);
    e.col(bi) += e.col(bj);
    e(bi, bi) = 0.0;
    e.row(bj).setZero();
    e.col(bj).setZero();
    a(bi) += a(bj);
    a(bj) = 0.0;
    alive[bj] = false;
    tag[bi] = std::min(tag[bi], tag[bj]);
    for (auto& l : labels) {
      if (l == static_cast<int>(bj)) l = static_cast<int>(bi);
    }
  }
  return labels;
}

std::vector<std::string> top_ingredients(const std::map<std::string, int>& counts,
                                         double top_fraction) {
  if (counts.empty()) return {};
  std::vector<std::pair<std::string, int>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(top_fraction * static_cast<double>(ranked.size()))));
  const int cutoff = ranked[std::min(keep, ranked.size()) - 1].second;
  std::vector<std::string> out;
  for (const auto& [ing, c] : ranked) {
    if (c >= cutoff) out.push_back(ing);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ClusteringResult country_clusters(std::span<const Document> corpus, double top_fraction) {
  std::map<std::string, std::map<std::string, int>> by_country;
  for (const auto& doc : corpus) {
    if (!doc.country) continue;
    auto& counts = by_country[*doc.country];
    for (const auto& ing : doc.ingredients) ++counts[ing];
  }
  if (by_country.empty()) throw Error(ErrorKind::EmptyCorpus, "no document carries a country");

  ClusteringResult out;
  std::vector<std::set<std::string>> typical;
  for (const auto& [country, counts] : by_country) {
    out.countries.push_back(country);
    const auto top = top_ingredients(counts, top_fraction);
    typical.emplace_back(top.begin(), top.end());
  }
  const auto n = static_cast<Eigen::Index>(out.countries.size());
  out.similarity = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto& x = typical[static_cast<std::size_t>(i)];
      const auto& y = typical[static_cast<std::size_t>(j)];
      std::size_t inter = 0;
      for (const auto& s : x) inter += y.count(s);
      const auto uni = x.size() + y.size() - inter;
      const double jac = uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
      out.similarity(i, j) = out.similarity(j, i) = jac;
    }
  }

  const auto labels = greedy_modularity_labels(out.similarity, out.countries);
  out.modularity = modularity(out.similarity, labels);

  const Eigen::VectorXd degree = out.similarity.rowwise().sum();
  const double two_m = degree.sum();
  std::map<int, CountryCluster> grouped;
  for (Eigen::Index i = 0; i < n; ++i) {
    grouped[labels[static_cast<std::size_t>(i)]].members.push_back(out.countries[static_cast<std::size_t>(i)]);
  }
  for (auto& [label, cluster] : grouped) {
    if (two_m > 0.0) {
      double internal = 0.0, deg = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (labels[static_cast<std::size_t>(i)] != label) continue;
        deg += degree(i);
        for (Eigen::Index j = 0; j < n; ++j) {
          if (labels[static_cast<std::size_t>(j)] == label) internal += out.similarity(i, j);
        }
      }
      cluster.modularity = internal / two_m - (deg / two_m) * (deg / two_m);
    }
    out.clusters.push_back(std::move(cluster));
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const auto& x, const auto& y) { return x.members.front() < y.members.front(); });
  return out;
}

}  // namespace culturenov
