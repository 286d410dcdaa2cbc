#include "culturenov/divergence.hpp"

#include <algorithm>
#include <cmath>

#include "culturenov/error.hpp"

namespace culturenov {
namespace {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

/// Walks the union of two sorted maps, calling f(key, p, q) with 0 for absent entries.
template <typename F>
void merge_walk(const std::map<std::string, double>& p, const std::map<std::string, double>& q,
                F&& f) {
  auto ip = p.begin();
  auto iq = q.begin();
  while (ip != p.end() || iq != q.end()) {
    if (iq == q.end() || (ip != p.end() && ip->first < iq->first)) {
      f(ip->first, ip->second, 0.0);
      ++ip;
    } else if (ip == p.end() || iq->first < ip->first) {
      f(iq->first, 0.0, iq->second);
      ++iq;
    } else {
      f(ip->first, ip->second, iq->second);
      ++ip;
      ++iq;
    }
  }
}

double jsd_maps(const std::map<std::string, double>& p, const std::map<std::string, double>& q,
                const MixtureWeights& w) {
  CompensatedSum kl_p, kl_q;
  merge_walk(p, q, [&](const std::string&, double pw, double qw) {
    if (pw == qw) return;  // the term vanishes exactly
    const double m = w.pi1() * pw + w.pi2() * qw;
    if (pw > 0.0) kl_p.add(pw * std::log2(pw / m));
    if (qw > 0.0) kl_q.add(qw * std::log2(qw / m));
  });
  return clamp_unit(w.pi1() * kl_p.value() + w.pi2() * kl_q.value());
}

}  // namespace

MixtureWeights::MixtureWeights(double pi1) : pi1_(pi1), pi2_(1.0 - pi1) {
  if (!(pi1 > 0.0 && pi1 < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "mixture weight pi1 must lie in (0, 1)");
  }
}

MixtureWeights MixtureWeights::size_proportional(const TokenDistribution& p,
                                                 const TokenDistribution& q) {
  const auto np = static_cast<double>(p.token_total());
  const auto nq = static_cast<double>(q.token_total());
  return MixtureWeights(np / (np + nq));
}

MixtureWeights MixtureWeights::swapped() const noexcept { return MixtureWeights(pi2_, pi1_); }

double jsd(const TokenDistribution& p, const TokenDistribution& q, const MixtureWeights& w) {
  return jsd_maps(p.probs(), q.probs(), w);
}

double jsd(const TokenDistribution& p, const TokenDistribution& q) {
  return jsd(p, q, MixtureWeights::size_proportional(p, q));
}

DecomposedJsd jsd_decomposed(const TokenDistribution& p, const TokenDistribution& q,
                             const MixtureWeights& w) {
  DecomposedJsd out;
  out.contributions.reserve(std::max(p.vocab_size(), q.vocab_size()));
  merge_walk(p.probs(), q.probs(), [&](const std::string& lemma, double pw, double qw) {
    WordContribution c{lemma, 0.0, Side::Neutral};
    if (pw != qw) {
      const double m = w.pi1() * pw + w.pi2() * qw;
      c.value = std::max(0.0, -xlog2x(m) + w.pi1() * xlog2x(pw) + w.pi2() * xlog2x(qw));
      c.attributed_to = qw > pw ? Side::Q : Side::P;
    }
    out.contributions.push_back(std::move(c));
  });
  out.total = jsd(p, q, w);
  return out;
}

double jsd_normalized(const std::map<std::string, double>& p,
                      const std::map<std::string, double>& q, const MixtureWeights& w) {
  auto normalize = [](const std::map<std::string, double>& raw) {
    CompensatedSum mass;
    for (const auto& [k, v] : raw) {
      if (v > 0.0) mass.add(v);
    }
    std::map<std::string, double> out;
    const double total = mass.value();
    if (total <= 0.0) return out;
    for (const auto& [k, v] : raw) {
      if (v > 0.0) out.emplace_hint(out.end(), k, v / total);
    }
    return out;
  };
  const auto pn = normalize(p);
  const auto qn = normalize(q);
  if (pn.empty() || qn.empty()) return 0.0;
  return jsd_maps(pn, qn, w);
}

}  // namespace culturenov
