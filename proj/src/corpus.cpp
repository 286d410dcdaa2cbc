#include "culturenov/corpus.hpp"

#include <cctype>
#include <unordered_set>

#include "culturenov/error.hpp"

namespace culturenov {

std::string_view to_string(Pos pos) noexcept {
  switch (pos) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Adv: return "ADV";
    case Pos::Num: return "NUM";
    case Pos::Other: return "OTHER";
  }
  return "OTHER";
}

Pos parse_pos(std::string_view tag) noexcept {
  std::string upper(tag);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "NOUN" || upper == "PROPN") return Pos::Noun;
  if (upper == "VERB") return Pos::Verb;
  if (upper == "ADJ") return Pos::Adj;
  if (upper == "ADV") return Pos::Adv;
  if (upper == "NUM") return Pos::Num;
  return Pos::Other;
}

bool is_content_pos(Pos pos) noexcept { return pos != Pos::Other; }

TokenCounts count_tokens(const Document& doc) {
  TokenCounts counts;
  for (const auto& tok : doc.body_tokens) ++counts[tok.lemma];
  return counts;
}

TokenCounts count_tokens(std::span<const std::string> lemmas) {
  TokenCounts counts;
  for (const auto& l : lemmas) ++counts[l];
  return counts;
}

TokenDistribution TokenDistribution::from_counts(const TokenCounts& counts) {
  std::int64_t total = 0;
  for (const auto& [lemma, n] : counts) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative count for '" + lemma + "'");
    total += n;
  }
  if (total < 1) throw Error(ErrorKind::EmptyDocument, "distribution needs at least one token");

  TokenDistribution dist;
  dist.token_total_ = total;
  const auto denom = static_cast<double>(total);
  for (const auto& [lemma, n] : counts) {
    if (n > 0) dist.probs_.emplace_hint(dist.probs_.end(), lemma, static_cast<double>(n) / denom);
  }
  return dist;
}

double TokenDistribution::prob(const std::string& lemma) const {
  auto it = probs_.find(lemma);
  return it == probs_.end() ? 0.0 : it->second;
}

TokenDistribution doc_distribution(const Document& doc) {
  if (doc.body_tokens.empty()) {
    throw Error(ErrorKind::EmptyDocument, "document '" + doc.id + "' has no content tokens");
  }
  return TokenDistribution::from_counts(count_tokens(doc));
}

TokenDistribution aggregate_distribution(std::span<const Document> docs) {
  TokenCounts pooled;
  for (const auto& doc : docs) {
    for (const auto& tok : doc.body_tokens) ++pooled[tok.lemma];
  }
  if (pooled.empty()) throw Error(ErrorKind::EmptyCorpus, "no tokens in any document");
  return TokenDistribution::from_counts(pooled);
}

ControlVars control_variables(const Document& variation,
                              const std::set<std::string>& ingredient_union,
                              double mean_doc_length) {
  ControlVars out;
  const auto n = variation.body_tokens.size();
  if (n > 0) {
    std::unordered_set<std::string_view> unique;
    for (const auto& tok : variation.body_tokens) unique.insert(tok.lemma);
    out.lexical_diversity = static_cast<double>(unique.size()) / static_cast<double>(n);
  }
  if (!variation.ingredients.empty()) {
    std::size_t fresh = 0;
    for (const auto& ing : variation.ingredients) {
      if (!ingredient_union.contains(ing)) ++fresh;
    }
    out.new_ingredient_ratio =
        static_cast<double>(fresh) / static_cast<double>(variation.ingredients.size());
  }
  if (mean_doc_length > 0.0) out.length_ratio = static_cast<double>(n) / mean_doc_length;
  return out;
}

std::string normalize_ingredient(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace culturenov
