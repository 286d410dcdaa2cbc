#include "culturenov/ppmi.hpp"

#include <cmath>

#include "culturenov/error.hpp"

namespace culturenov {

std::vector<std::string> lemmas_of(const Document& doc) {
  std::vector<std::string> out;
  out.reserve(doc.body_tokens.size());
  for (const auto& tok : doc.body_tokens) out.push_back(tok.lemma);
  return out;
}

PpmiMatrix::Key PpmiMatrix::key(const std::string& a, const std::string& b) {
  return a <= b ? Key{a, b} : Key{b, a};
}

PpmiMatrix PpmiMatrix::build(std::span<const std::vector<std::string>> sequences, int window) {
  if (window < 2) throw Error(ErrorKind::InvalidArgument, "PMI window must be at least 2");

  PpmiMatrix m;
  std::map<Key, std::int64_t> pair_counts;
  std::int64_t unigram_total = 0;
  const auto reach = static_cast<std::size_t>(window - 1);
  for (const auto& seq : sequences) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      ++m.unigrams_[seq[i]];
      ++unigram_total;
      for (std::size_t j = i + 1; j < seq.size() && j - i <= reach; ++j) {
        ++pair_counts[key(seq[i], seq[j])];
        ++m.pair_total_;
      }
    }
  }
  if (unigram_total == 0) throw Error(ErrorKind::EmptyCorpus, "no tokens to build PMI from");

  for (const auto& [w, n] : m.unigrams_) m.vocab_.insert(w);

  const auto U = static_cast<double>(unigram_total);
  const auto P = static_cast<double>(m.pair_total_);
  for (const auto& [k, n] : pair_counts) {
    const double p_ab = static_cast<double>(n) / P;
    const double p_a = static_cast<double>(m.unigrams_.at(k.first)) / U;
    const double p_b = static_cast<double>(m.unigrams_.at(k.second)) / U;
    const double pmi = std::log2(p_ab / (p_a * p_b));
    if (pmi > 0.0) {
      m.pairs_.emplace_hint(m.pairs_.end(), k, pmi);
      m.rows_[k.first][k.second] = pmi;
      m.rows_[k.second][k.first] = pmi;
    }
  }
  return m;
}

PpmiMatrix PpmiMatrix::build(std::span<const Document> docs, int window) {
  std::vector<std::vector<std::string>> seqs;
  seqs.reserve(docs.size());
  for (const auto& d : docs) seqs.push_back(lemmas_of(d));
  return build(std::span<const std::vector<std::string>>(seqs), window);
}

PpmiMatrix PpmiMatrix::build(const Document& doc, int window) {
  return build(std::span<const Document>(&doc, 1), window);
}

double PpmiMatrix::value(const std::string& a, const std::string& b) const {
  auto it = pairs_.find(key(a, b));
  return it == pairs_.end() ? 0.0 : it->second;
}

bool PpmiMatrix::contains(const std::string& a, const std::string& b) const {
  return pairs_.contains(key(a, b));
}

const PpmiMatrix::Row& PpmiMatrix::row(const std::string& w) const {
  static const Row kEmpty;
  auto it = rows_.find(w);
  return it == rows_.end() ? kEmpty : it->second;
}

}  // namespace culturenov
