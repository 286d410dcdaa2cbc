#include "culturenov/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "culturenov/error.hpp"

namespace culturenov {
namespace {

void require_kb_size(std::span<const Document> docs) {
  if (docs.size() < 2) {
    throw Error(ErrorKind::InsufficientKB,
                "knowledge space needs at least 2 documents, got " + std::to_string(docs.size()));
  }
}

void require_nonempty(const Document& doc) {
  if (doc.body_tokens.empty()) {
    throw Error(ErrorKind::EmptyDocument, "document '" + doc.id + "' has no content tokens");
  }
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

}  // namespace

double calibrate_newness_threshold(std::span<const Document> docs, ThresholdRule rule) {
  require_kb_size(docs);
  for (const auto& d : docs) require_nonempty(d);

  TokenCounts pooled;
  std::vector<TokenCounts> per_doc;
  per_doc.reserve(docs.size());
  for (const auto& d : docs) {
    per_doc.push_back(count_tokens(d));
    for (const auto& [w, n] : per_doc.back()) pooled[w] += n;
  }

  std::vector<double> positives;
  for (const auto& held_out : per_doc) {
    TokenCounts rest = pooled;
    for (const auto& [w, n] : held_out) {
      auto it = rest.find(w);
      it->second -= n;
      if (it->second == 0) rest.erase(it);
    }
    const auto p = TokenDistribution::from_counts(rest);
    const auto q = TokenDistribution::from_counts(held_out);
    const auto dec = jsd_decomposed(p, q, MixtureWeights::size_proportional(p, q));
    for (const auto& c : dec.contributions) {
      if (c.value > 0.0) positives.push_back(c.value);
    }
  }
  if (positives.empty()) return 0.0;

  if (rule.kind == ThresholdRule::Kind::Quantile) {
    if (!(rule.quantile >= 0.0 && rule.quantile <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "threshold quantile must lie in [0, 1]");
    }
    std::sort(positives.begin(), positives.end());
    return quantile_sorted(positives, rule.quantile);
  }
  return std::accumulate(positives.begin(), positives.end(), 0.0) /
         static_cast<double>(positives.size());
}

double calibrate_difference_threshold(std::span<const Document> docs) {
  require_kb_size(docs);
  std::vector<TokenDistribution> dists;
  dists.reserve(docs.size());
  for (const auto& d : docs) dists.push_back(doc_distribution(d));

  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    for (std::size_t j = i + 1; j < dists.size(); ++j) {
      sum += jsd(dists[i], dists[j], MixtureWeights::equal());
      ++pairs;
    }
  }
  return sum / static_cast<double>(pairs);
}

KnowledgeSpace KnowledgeSpace::build(std::string product, std::string culture,
                                     std::vector<Document> docs, const NoveltyConfig& config) {
  require_kb_size(docs);
  for (const auto& d : docs) require_nonempty(d);

  KnowledgeSpace kb;
  kb.product_ = std::move(product);
  kb.culture_ = std::move(culture);
  kb.pmi_window_ = config.pmi_window;
  kb.docs_ = std::move(docs);
  kb.doc_dists_.reserve(kb.docs_.size());
  std::size_t total_len = 0;
  for (const auto& d : kb.docs_) {
    kb.doc_dists_.push_back(doc_distribution(d));
    total_len += d.body_tokens.size();
    kb.ingredient_union_.insert(d.ingredients.begin(), d.ingredients.end());
  }
  kb.mean_doc_length_ = static_cast<double>(total_len) / static_cast<double>(kb.docs_.size());
  kb.aggregate_ = aggregate_distribution(kb.docs_);
  kb.ppmi_ = PpmiMatrix::build(std::span<const Document>(kb.docs_), config.pmi_window);
  kb.epsilon_newness_ = calibrate_newness_threshold(kb.docs_, config.newness_rule);
  kb.epsilon_difference_ = calibrate_difference_threshold(kb.docs_);
  return kb;
}

NewnessScores newness(const KnowledgeSpace& kb, const Document& variation, double lambda1,
                      double lambda2) {
  if (std::abs(lambda1 + lambda2 - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "lambda1 + lambda2 must equal 1");
  }
  const auto q = doc_distribution(variation);
  const auto& p = kb.aggregate();
  const auto dec = jsd_decomposed(p, q, MixtureWeights::size_proportional(p, q));
  const double eps = kb.epsilon_newness();

  std::size_t appear = 0, disappear = 0;
  for (const auto& c : dec.contributions) {
    if (!(c.value > eps)) continue;
    if (c.attributed_to == Side::Q) ++appear;
    if (c.attributed_to == Side::P) ++disappear;
  }
  NewnessScores out;
  out.appearance = static_cast<double>(appear) / static_cast<double>(q.vocab_size());
  out.disappearance = static_cast<double>(disappear) / static_cast<double>(p.vocab_size());
  out.newness = lambda1 * out.appearance + lambda2 * out.disappearance;
  return out;
}

double uniqueness(const KnowledgeSpace& kb, const Document& variation) {
  const auto q = doc_distribution(variation);
  return jsd(kb.aggregate(), q, MixtureWeights::size_proportional(kb.aggregate(), q));
}

double difference(const KnowledgeSpace& kb, const Document& variation) {
  const auto q = doc_distribution(variation);
  std::size_t beyond = 0;
  for (const auto& d : kb.doc_distributions()) {
    if (jsd(d, q, MixtureWeights::equal()) > kb.epsilon_difference()) ++beyond;
  }
  return static_cast<double>(beyond) / static_cast<double>(kb.doc_distributions().size());
}

double new_surprise(const PpmiMatrix& kb_ppmi, const PpmiMatrix& var_ppmi) {
  const auto& pairs = var_ppmi.pairs();
  if (pairs.empty()) return 0.0;
  std::size_t novel = 0;
  for (const auto& [k, v] : pairs) {
    const bool oov = !kb_ppmi.vocab().contains(k.first) || !kb_ppmi.vocab().contains(k.second);
    if (oov || !kb_ppmi.pairs().contains(k)) ++novel;
  }
  return static_cast<double>(novel) / static_cast<double>(pairs.size());
}

double divergent_surprise(const PpmiMatrix& kb_ppmi, const PpmiMatrix& var_ppmi) {
  double sum = 0.0;
  std::size_t contributing = 0;
  for (const auto& w : var_ppmi.vocab()) {
    if (!kb_ppmi.vocab().contains(w)) continue;
    const auto& kb_row = kb_ppmi.row(w);
    const auto& var_row = var_ppmi.row(w);
    if (kb_row.empty() || var_row.empty()) continue;
    sum += jsd_normalized(kb_row, var_row, MixtureWeights::equal());
    ++contributing;
  }
  return contributing == 0 ? 0.0 : sum / static_cast<double>(contributing);
}

NoveltyScores score_all(const KnowledgeSpace& kb, const Document& variation,
                        const NoveltyConfig& config) {
  require_nonempty(variation);
  const auto nw = newness(kb, variation, config.lambda1, config.lambda2);
  const auto var_ppmi = PpmiMatrix::build(variation, kb.pmi_window());

  NoveltyScores s;
  s.appearance = nw.appearance;
  s.disappearance = nw.disappearance;
  s.newness = nw.newness;
  s.uniqueness = uniqueness(kb, variation);
  s.difference = difference(kb, variation);
  s.new_surprise = new_surprise(kb.ppmi(), var_ppmi);
  s.divergent_surprise = divergent_surprise(kb.ppmi(), var_ppmi);
  return s;
}

ControlVars control_variables(const Document& variation, const KnowledgeSpace& kb) {
  return control_variables(variation, kb.ingredient_union(), kb.mean_doc_length());
}

}  // namespace culturenov
