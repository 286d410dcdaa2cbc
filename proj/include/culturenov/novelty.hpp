#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "culturenov/corpus.hpp"
#include "culturenov/divergence.hpp"
#include "culturenov/ppmi.hpp"

namespace culturenov {

/// How the leave-one-out word contributions are reduced to the newness threshold.
struct ThresholdRule {
  enum class Kind { Mean, Quantile };
  Kind kind = Kind::Mean;
  double quantile = 0.5;  // used only for Kind::Quantile

  static ThresholdRule mean() { return {}; }
  static ThresholdRule at_quantile(double q) { return {Kind::Quantile, q}; }
};

struct NoveltyConfig {
  double lambda1 = 0.8;
  double lambda2 = 0.2;
  int pmi_window = kDefaultPmiWindow;
  ThresholdRule newness_rule = ThresholdRule::mean();
};

/// Leave-one-out newness threshold: for every document, decompose the JSD between
/// the pooled remaining documents and the held-out one, then reduce all strictly
/// positive per-word contributions. Throws InsufficientKB below two documents.
double calibrate_newness_threshold(std::span<const Document> docs,
                                   ThresholdRule rule = ThresholdRule::mean());

/// Mean equal-weight JSD over all unordered document pairs.
double calibrate_difference_threshold(std::span<const Document> docs);

/// Documents describing one product inside one culture, with every quantity the
/// metrics need precomputed. Immutable once built.
class KnowledgeSpace {
 public:
  static KnowledgeSpace build(std::string product, std::string culture, std::vector<Document> docs,
                              const NoveltyConfig& config = {});

  const std::string& product() const noexcept { return product_; }
  const std::string& culture() const noexcept { return culture_; }
  const std::vector<Document>& docs() const noexcept { return docs_; }
  const std::vector<TokenDistribution>& doc_distributions() const noexcept { return doc_dists_; }
  const TokenDistribution& aggregate() const noexcept { return aggregate_; }
  const PpmiMatrix& ppmi() const noexcept { return ppmi_; }
  double epsilon_newness() const noexcept { return epsilon_newness_; }
  double epsilon_difference() const noexcept { return epsilon_difference_; }
  const std::set<std::string>& ingredient_union() const noexcept { return ingredient_union_; }
  double mean_doc_length() const noexcept { return mean_doc_length_; }
  int pmi_window() const noexcept { return pmi_window_; }

 private:
  KnowledgeSpace() = default;

  std::string product_;
  std::string culture_;
  std::vector<Document> docs_;
  std::vector<TokenDistribution> doc_dists_;
  TokenDistribution aggregate_;
  PpmiMatrix ppmi_;
  double epsilon_newness_ = 0.0;
  double epsilon_difference_ = 0.0;
  std::set<std::string> ingredient_union_;
  double mean_doc_length_ = 0.0;
  int pmi_window_ = kDefaultPmiWindow;
};

struct NewnessScores {
  double appearance = 0.0;
  double disappearance = 0.0;
  double newness = 0.0;
};

struct NoveltyScores {
  double appearance = 0.0;
  double disappearance = 0.0;
  double newness = 0.0;
  double uniqueness = 0.0;
  double difference = 0.0;
  double new_surprise = 0.0;
  double divergent_surprise = 0.0;
};

NewnessScores newness(const KnowledgeSpace& kb, const Document& variation, double lambda1 = 0.8,
                      double lambda2 = 0.2);
double uniqueness(const KnowledgeSpace& kb, const Document& variation);
double difference(const KnowledgeSpace& kb, const Document& variation);
/// Share of the variation's positive pairs that the knowledge-space matrix lacks.
double new_surprise(const PpmiMatrix& kb_ppmi, const PpmiMatrix& var_ppmi);
/// Mean equal-weight JSD between the L1-normalized PPMI rows of shared lemmas.
double divergent_surprise(const PpmiMatrix& kb_ppmi, const PpmiMatrix& var_ppmi);

NoveltyScores score_all(const KnowledgeSpace& kb, const Document& variation,
                        const NoveltyConfig& config = {});

ControlVars control_variables(const Document& variation, const KnowledgeSpace& kb);

}  // namespace culturenov
