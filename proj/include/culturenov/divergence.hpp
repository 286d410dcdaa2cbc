#pragma once

#include <string>
#include <vector>

#include "culturenov/corpus.hpp"

namespace culturenov {

/// Mixture weights (pi1, pi2) for M = pi1*P + pi2*Q. Always sum to one.
class MixtureWeights {
 public:
  /// Throws InvalidArgument unless 0 < pi1 < 1.
  explicit MixtureWeights(double pi1);

  static MixtureWeights equal() { return MixtureWeights(0.5); }
  /// pi1 = |P| / (|P| + |Q|) using the token totals the distributions came from.
  static MixtureWeights size_proportional(const TokenDistribution& p, const TokenDistribution& q);

  double pi1() const noexcept { return pi1_; }
  double pi2() const noexcept { return pi2_; }
  MixtureWeights swapped() const noexcept;

 private:
  MixtureWeights(double pi1, double pi2) : pi1_(pi1), pi2_(pi2) {}
  double pi1_;
  double pi2_;
};

enum class Side { P, Q, Neutral };

struct WordContribution {
  std::string lemma;
  double value = 0.0;  // bits, >= 0
  Side attributed_to = Side::Neutral;
};

struct DecomposedJsd {
  double total = 0.0;
  std::vector<WordContribution> contributions;  // sorted by lemma, union vocabulary
};

/// Base-2 Jensen-Shannon divergence pi1*KL(P||M) + pi2*KL(Q||M), clamped to [0, 1].
double jsd(const TokenDistribution& p, const TokenDistribution& q, const MixtureWeights& w);
double jsd(const TokenDistribution& p, const TokenDistribution& q);  // size-proportional

/// Per-word additive terms -m log m + pi1 p log p + pi2 q log q. They sum to jsd().
DecomposedJsd jsd_decomposed(const TokenDistribution& p, const TokenDistribution& q,
                             const MixtureWeights& w);

/// JSD over two arbitrary non-negative weight vectors given as sparse maps; each
/// side is L1-normalized first. Used for PPMI rows. Empty sides yield 0.
double jsd_normalized(const std::map<std::string, double>& p,
                      const std::map<std::string, double>& q, const MixtureWeights& w);

}  // namespace culturenov
