#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "culturenov/corpus.hpp"
#include "culturenov/distances.hpp"

namespace culturenov {

inline constexpr double kDefaultHoldoutFraction = 0.3;
inline constexpr double kDefaultTopIngredientFraction = 0.2;

/// Forces the country of recipes whose title contains `title_pattern`.
struct TitleOverride {
  std::string title_pattern;
  std::string country;
};

struct DishSpec {
  std::string canonical_name;
  std::vector<std::string> aliases;            // always contains canonical_name
  std::vector<std::string> excluded_patterns;
  std::vector<std::string> origins;            // empty = most frequent matched country
  std::vector<TitleOverride> overrides;
};

/// JSON array of {"name","aliases":[...],"exclude":[...],"origins":[...],
/// "overrides":[{"title_pattern","country"}]}. Throws ParseError.
std::vector<DishSpec> parse_dish_specs(std::string_view json_text);
std::vector<DishSpec> load_dish_specs(const std::filesystem::path& path);

/// Case-insensitive whole-word search. With `allow_plural`, a trailing "s" or
/// "es" on the matched word is accepted.
bool contains_whole_word(std::string_view haystack, std::string_view needle,
                         bool allow_plural = false);

/// Longest whole-word match of any country name or demonym; ties go to the
/// lexicographically smallest ISO code.
std::optional<std::string> detect_country(std::string_view title, const CountryRegistry& registry);

bool match_dish(std::string_view title, const DishSpec& dish);

/// Country after applying the dish's title overrides to the document's own country.
std::optional<std::string> effective_country(const Document& doc, const DishSpec& dish);

/// Fills in `country` for documents that lack one, from their titles.
void assign_countries(std::span<Document> corpus, const CountryRegistry& registry);

struct CorpusSplit {
  std::string product;
  std::string origin;
  std::vector<std::string> knowledge;   // document ids, sorted
  std::vector<std::string> variations;  // document ids, sorted
  std::vector<std::string> held_out;    // origin ids moved into variations, sorted
  std::uint64_t holdout_seed = 0;
  double holdout_fraction = kDefaultHoldoutFraction;

  bool eligible() const { return knowledge.size() >= 2 && variations.size() >= 2; }
};

/// Partition the dish's matched documents without enforcing the size floors.
CorpusSplit plan_split(std::span<const Document> corpus, const DishSpec& dish,
                       const std::string& origin, double holdout_fraction, std::uint64_t seed);

/// plan_split plus the >= 2 / >= 2 eligibility floors (throws IneligibleDish).
CorpusSplit build_split(std::span<const Document> corpus, const DishSpec& dish,
                        const std::string& origin,
                        double holdout_fraction = kDefaultHoldoutFraction,
                        std::uint64_t seed = 0);

/// Origins a dish is split on: its declared list, or else the country with the
/// most matched documents (ties to the smallest ISO). Empty if nothing matched.
std::vector<std::string> dish_origins(std::span<const Document> corpus, const DishSpec& dish);

struct CountryCluster {
  std::vector<std::string> members;  // sorted ISO codes
  double modularity = 0.0;           // this community's share of the total
};

struct ClusteringResult {
  std::vector<std::string> countries;  // node order of `similarity`
  Eigen::MatrixXd similarity;          // Jaccard, zero diagonal
  std::vector<CountryCluster> clusters;
  double modularity = 0.0;
};

/// Weighted Newman modularity of a partition given as one label per node.
double modularity(const Eigen::MatrixXd& weights, std::span<const int> labels);

/// Deterministic Clauset-Newman-Moore agglomeration. Returns one label per node.
std::vector<int> greedy_modularity_labels(const Eigen::MatrixXd& weights,
                                          std::span<const std::string> node_names);

/// Each country's most frequent ingredients (ties at the cutoff kept).
std::vector<std::string> top_ingredients(const std::map<std::string, int>& counts,
                                         double top_fraction);

/// Cluster countries by Jaccard similarity of their top ingredients.
/// Throws EmptyCorpus when no document carries a country.
ClusteringResult country_clusters(std::span<const Document> corpus,
                                  double top_fraction = kDefaultTopIngredientFraction);

}  // namespace culturenov
