#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "culturenov/corpus.hpp"

namespace culturenov {

inline constexpr int kDefaultPmiWindow = 3;

/// Sparse symmetric positive-PMI matrix from windowed co-occurrence counts.
///
/// Two tokens co-occur when their distance within a document is at most
/// `window - 1`; windows never span documents. A token may pair with another
/// occurrence of the same lemma. p(a,b) = pair_count / pair_total and p(w) is
/// the unigram frequency over the same documents. Only entries with
/// log2(p(a,b) / (p(a) p(b))) > 0 are kept.
class PpmiMatrix {
 public:
  using Key = std::pair<std::string, std::string>;  // first <= second
  using Row = std::map<std::string, double>;

  /// Throws EmptyCorpus if the sequences hold no tokens, InvalidArgument if window < 2.
  static PpmiMatrix build(std::span<const std::vector<std::string>> sequences,
                          int window = kDefaultPmiWindow);
  static PpmiMatrix build(std::span<const Document> docs, int window = kDefaultPmiWindow);
  static PpmiMatrix build(const Document& doc, int window = kDefaultPmiWindow);

  static Key key(const std::string& a, const std::string& b);

  const std::map<Key, double>& pairs() const noexcept { return pairs_; }
  const std::set<std::string>& vocab() const noexcept { return vocab_; }
  const std::map<std::string, std::int64_t>& unigram_counts() const noexcept { return unigrams_; }
  std::int64_t pair_total() const noexcept { return pair_total_; }

  /// 0 when the pair is absent.
  double value(const std::string& a, const std::string& b) const;
  bool contains(const std::string& a, const std::string& b) const;
  /// Positive PPMI neighbours of `w`; empty when w has none.
  const Row& row(const std::string& w) const;

 private:
  std::map<Key, double> pairs_;
  std::set<std::string> vocab_;
  std::map<std::string, std::int64_t> unigrams_;
  std::int64_t pair_total_ = 0;
  std::map<std::string, Row> rows_;
};

std::vector<std::string> lemmas_of(const Document& doc);

}  // namespace culturenov
