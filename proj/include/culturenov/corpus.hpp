#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace culturenov {

/// Coarse part-of-speech classes. Only the first five survive filtering.
enum class Pos { Noun, Verb, Adj, Adv, Num, Other };

std::string_view to_string(Pos pos) noexcept;
/// Maps a tag name ("NOUN", "VERB", "PROPN", "DET", ...) onto the closed set.
/// Unrecognized tags become Pos::Other.
Pos parse_pos(std::string_view tag) noexcept;
bool is_content_pos(Pos pos) noexcept;

struct AnnotatedToken {
  std::string lemma;
  Pos pos = Pos::Noun;

  friend bool operator==(const AnnotatedToken&, const AnnotatedToken&) = default;
};

struct Document {
  std::string id;
  std::string title;
  std::vector<AnnotatedToken> body_tokens;  // content tokens only
  std::optional<std::string> country;       // ISO alpha-2; nullopt = UNKNOWN
  std::optional<std::string> product;
  std::set<std::string> ingredients;        // normalized
  std::int64_t raw_token_count = 0;
};

using TokenCounts = std::map<std::string, std::int64_t>;

TokenCounts count_tokens(const Document& doc);
TokenCounts count_tokens(std::span<const std::string> lemmas);

/// Sparse lemma -> probability map. Entries are strictly positive and sum to one.
class TokenDistribution {
 public:
  /// Throws Error{EmptyDocument} when the counts hold no tokens.
  static TokenDistribution from_counts(const TokenCounts& counts);

  const std::map<std::string, double>& probs() const noexcept { return probs_; }
  std::int64_t token_total() const noexcept { return token_total_; }
  std::size_t vocab_size() const noexcept { return probs_.size(); }
  double prob(const std::string& lemma) const;

  friend bool operator==(const TokenDistribution&, const TokenDistribution&) = default;

 private:
  std::map<std::string, double> probs_;
  std::int64_t token_total_ = 0;
};

TokenDistribution doc_distribution(const Document& doc);

/// Pooled counts over all documents divided by the pooled token total.
/// Throws Error{EmptyCorpus} if no tokens are present at all.
TokenDistribution aggregate_distribution(std::span<const Document> docs);

struct ControlVars {
  double lexical_diversity = 0.0;
  double new_ingredient_ratio = 0.0;
  double length_ratio = 0.0;
};

ControlVars control_variables(const Document& variation,
                              const std::set<std::string>& ingredient_union,
                              double mean_doc_length);

/// Lowercase, trim, collapse internal whitespace.
std::string normalize_ingredient(std::string_view raw);

}  // namespace culturenov
