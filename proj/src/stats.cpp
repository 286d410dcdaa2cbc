#include "culturenov/stats.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "culturenov/error.hpp"

namespace culturenov::stats {
namespace {

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorKind::LengthMismatch,
                "series lengths differ (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

void require_min_obs(std::size_t n, std::size_t min_n) {
  if (n < min_n) {
    throw Error(ErrorKind::InsufficientObservations,
                "need at least " + std::to_string(min_n) + " observations, got " + std::to_string(n));
  }
}

// Number of inversions, sorting `v` in place.
std::int64_t count_inversions(std::vector<double>& v) {
  std::vector<double> buf(v.size());
  std::int64_t inversions = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const auto mid = std::min(lo + width, v.size());
      const auto hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          inversions += static_cast<std::int64_t>(mid - i);
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    v.swap(buf);
  }
  return inversions;
}

struct TieSums {
  double pairs = 0.0;  // sum t(t-1)/2
  double v1 = 0.0;     // sum t(t-1)(2t+5)
  double v2 = 0.0;     // sum t(t-1)(t-2)
};

TieSums tie_sums(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  TieSums s;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    const auto t = static_cast<double>(j - i);
    s.pairs += t * (t - 1.0) / 2.0;
    s.v1 += t * (t - 1.0) * (2.0 * t + 5.0);
    s.v2 += t * (t - 1.0) * (t - 2.0);
    i = j;
  }
  return s;
}

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

double student_t_two_sided(double t, double dof) {
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  return std::clamp(boost::math::ibeta(dof / 2.0, 0.5, dof / (dof + t * t)), 0.0, 1.0);
}

double f_upper_tail(double f, double d1, double d2) {
  if (std::isinf(f)) return 0.0;
  if (!(f > 0.0)) return 1.0;
  return std::clamp(boost::math::ibeta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f)), 0.0, 1.0);
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size());
  require_min_obs(x.size(), 3);
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorKind::ConstantSeries, "series has zero variance");

  Correlation out;
  out.n = x.size();
  out.coefficient = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double r = out.coefficient;
  const double dof = n - 2.0;
  out.p_value = std::abs(r) >= 1.0 ? 0.0 : student_t_two_sided(r * std::sqrt(dof / (1.0 - r * r)), dof);
  return out;
}

Correlation kendall_tau(std::span<const double> x, std::span<const double> y) {
  require_same_length(x.size(), y.size());
  require_min_obs(x.size(), 3);
  const auto n = x.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] != x[b] ? x[a] < x[b] : y[a] < y[b];
  });

  // Joint ties in (x, y).
  double joint = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && x[order[j]] == x[order[i]] && y[order[j]] == y[order[i]]) ++j;
    const auto t = static_cast<double>(j - i);
    joint += t * (t - 1.0) / 2.0;
    i = j;
  }

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  const auto swaps = static_cast<double>(count_inversions(ys));

  const auto tx = tie_sums(std::vector<double>(x.begin(), x.end()));
  const auto ty = tie_sums(std::vector<double>(y.begin(), y.end()));
  const double m = static_cast<double>(n);
  const double total = m * (m - 1.0) / 2.0;
  if (tx.pairs == total || ty.pairs == total) {
    throw Error(ErrorKind::AllTied, "one series is entirely tied");
  }

  const double con_minus_dis = total - tx.pairs - ty.pairs + joint - 2.0 * swaps;
  Correlation out;
  out.n = n;
  out.coefficient =
      std::clamp(con_minus_dis / std::sqrt((total - tx.pairs) * (total - ty.pairs)), -1.0, 1.0);
  double var = (m * (m - 1.0) * (2.0 * m + 5.0) - tx.v1 - ty.v1) / 18.0 +
               (2.0 * tx.pairs * ty.pairs) / (m * (m - 1.0));
  if (n > 2) var += tx.v2 * ty.v2 / (9.0 * m * (m - 1.0) * (m - 2.0));
  const double z = con_minus_dis / std::sqrt(var);
  out.p_value = std::clamp(std::erfc(std::abs(z) / std::sqrt(2.0)), 0.0, 1.0);
  return out;
}

double rbo(std::span<const std::string> a, std::span<const std::string> b, double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidArgument, "RBO persistence must lie in (0, 1)");
  for (auto list : {a, b}) {
    std::unordered_set<std::string_view> seen;
    for (const auto& id : list) {
      if (!seen.insert(id).second) throw Error(ErrorKind::DuplicateIds, "duplicate id '" + id + "'");
    }
  }
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  // the series below sums to 1 only up to rounding
  if (std::equal(a.begin(), a.end(), b.begin(), b.end())) return 1.0;

  const auto& shorter = a.size() <= b.size() ? a : b;
  const auto& longer = a.size() <= b.size() ? b : a;
  const std::size_t s = shorter.size();
  const std::size_t l = longer.size();

  // `pending` holds items seen in exactly one list so far.
  std::unordered_set<std::string_view> pending;
  double overlap = 0.0;
  double weight = (1.0 - p) / p;
  double sum = 0.0;
  auto step = [&](std::string_view item) {
    if (pending.erase(item) == 1) {
      overlap += 1.0;
    } else {
      pending.insert(item);
    }
  };

  for (std::size_t d = 1; d <= s; ++d) {
    const auto& x = shorter[d - 1];
    const auto& y = longer[d - 1];
    if (x == y) {
      overlap += 1.0;
    } else {
      step(x);
      step(y);
    }
    weight *= p;
    sum += overlap / static_cast<double>(d) * weight;
  }
  const double short_overlap = overlap;
  for (std::size_t d = s + 1; d <= l; ++d) {
    if (pending.erase(longer[d - 1]) == 1) overlap += 1.0;
    weight *= p;
    const auto dd = static_cast<double>(d);
    sum += overlap / dd * weight;
    sum += short_overlap * (dd - static_cast<double>(s)) / (dd * static_cast<double>(s)) * weight;
  }
  const double tail = std::pow(p, static_cast<double>(l));
  return std::clamp(
      sum + ((overlap - short_overlap) / static_cast<double>(l) + short_overlap / static_cast<double>(s)) * tail,
      0.0, 1.0);
}

std::map<std::string, double> RegressionResult::coefficient_map() const {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < terms.size(); ++i) out[terms[i]] = coefficients(static_cast<Eigen::Index>(i));
  return out;
}

std::size_t RegressionResult::index_of(const std::string& term) const {
  auto it = std::find(terms.begin(), terms.end(), term);
  if (it == terms.end()) throw Error(ErrorKind::InvalidArgument, "no term '" + term + "'");
  return static_cast<std::size_t>(it - terms.begin());
}

double RegressionResult::coefficient(const std::string& term) const {
  return coefficients(static_cast<Eigen::Index>(index_of(term)));
}

RegressionResult ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                     std::vector<std::string> terms, CovarianceType cov) {
  const auto n = design.rows();
  const auto k = design.cols();
  require_same_length(static_cast<std::size_t>(n), static_cast<std::size_t>(y.size()));
  if (static_cast<Eigen::Index>(terms.size()) != k) {
    throw Error(ErrorKind::InvalidArgument, "one term name per design column required");
  }
  if (k == 0 || n < k + 1) {
    throw Error(ErrorKind::InsufficientObservations,
                std::to_string(n) + " rows for " + std::to_string(k) + " columns");
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < k) {
    throw Error(ErrorKind::RankDeficient,
                "design rank " + std::to_string(qr.rank()) + " < " + std::to_string(k) + " columns");
  }

  RegressionResult out;
  out.terms = std::move(terms);
  out.n_obs = static_cast<std::size_t>(n);
  out.coefficients = qr.solve(y);
  out.residuals = y - design * out.coefficients;
  const double ssr = out.residuals.squaredNorm();
  const auto dof = static_cast<double>(n - k);

  // (X'X)^-1 = P R^-1 R^-T P' from X P = Q R.
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  const auto& perm = qr.colsPermutation();
  const Eigen::MatrixXd xtx_inv = perm * (r_inv * r_inv.transpose()) * perm.transpose();

  Eigen::MatrixXd covariance;
  if (cov == CovarianceType::HC1) {
    const Eigen::MatrixXd meat =
        design.transpose() * out.residuals.array().square().matrix().asDiagonal() * design;
    covariance = xtx_inv * meat * xtx_inv * (static_cast<double>(n) / dof);
  } else {
    covariance = xtx_inv * (ssr / dof);
  }

  out.std_errors = covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  out.t_stats.resize(k);
  out.p_values.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double b = out.coefficients(i);
    const double se = out.std_errors(i);
    double t = 0.0;
    if (se > 0.0) {
      t = b / se;
    } else if (b != 0.0) {
      t = std::copysign(std::numeric_limits<double>::infinity(), b);
    }
    out.t_stats(i) = t;
    out.p_values(i) = se > 0.0 || b != 0.0 ? student_t_two_sided(t, dof) : 1.0;
  }

  const double mean_y = y.mean();
  const double sst = (y.array() - mean_y).square().sum();
  out.r_squared = sst > 0.0 ? std::clamp(1.0 - ssr / sst, 0.0, 1.0) : 0.0;
  if (k > 1 && sst > 0.0) {
    const double d1 = static_cast<double>(k - 1);
    out.f_statistic = ssr > 0.0 ? ((sst - ssr) / d1) / (ssr / dof)
                                : std::numeric_limits<double>::infinity();
    out.f_p_value = f_upper_tail(out.f_statistic, d1, dof);
  }
  return out;
}

RegressionResult ols_with_intercept(const Eigen::MatrixXd& regressors, const Eigen::VectorXd& y,
                                    std::vector<std::string> names, CovarianceType cov) {
  Eigen::MatrixXd design(regressors.rows(), regressors.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(regressors.cols()) = regressors;
  names.insert(names.begin(), "const");
  return ols(design, y, std::move(names), cov);
}

namespace {

struct PointEffects {
  double acme = 0.0;
  double ade = 0.0;
};

PointEffects mediation_point(const Eigen::VectorXd& t, const Eigen::VectorXd& m,
                             const Eigen::VectorXd& y, const Eigen::MatrixXd& controls) {
  const auto n = t.size();
  const auto c = controls.cols();
  std::vector<std::string> names{"treatment"};
  for (Eigen::Index j = 0; j < c; ++j) names.push_back("control" + std::to_string(j));

  Eigen::MatrixXd med_design(n, 1 + c);
  med_design.col(0) = t;
  med_design.rightCols(c) = controls;
  const auto med_fit = ols_with_intercept(med_design, m, names);

  Eigen::MatrixXd out_design(n, 2 + c);
  out_design.col(0) = t;
  out_design.col(1) = m;
  out_design.rightCols(c) = controls;
  auto out_names = names;
  out_names.insert(out_names.begin() + 1, "mediator");
  const auto out_fit = ols_with_intercept(out_design, y, out_names);

  const double a = med_fit.coefficient("treatment");
  const double b = out_fit.coefficient("mediator");
  return {a * b, out_fit.coefficient("treatment")};
}

EffectEstimate summarize(double estimate, std::vector<double> draws, double level) {
  EffectEstimate e;
  e.estimate = estimate;
  if (draws.empty()) return e;
  std::sort(draws.begin(), draws.end());
  const double alpha = 1.0 - level;
  e.ci_low = percentile(draws, alpha / 2.0);
  e.ci_high = percentile(draws, 1.0 - alpha / 2.0);
  const auto below = static_cast<double>(std::count_if(draws.begin(), draws.end(), [](double v) { return v <= 0.0; }));
  const auto above = static_cast<double>(std::count_if(draws.begin(), draws.end(), [](double v) { return v >= 0.0; }));
  e.p_value = std::min(1.0, 2.0 * std::min(below, above) / static_cast<double>(draws.size()));
  return e;
}

}  // namespace

MediationResult mediate(std::span<const double> treatment, std::span<const double> mediator,
                        std::span<const double> outcome, const Eigen::MatrixXd& controls,
                        const MediationOptions& options) {
  const auto n = treatment.size();
  require_same_length(n, mediator.size());
  require_same_length(n, outcome.size());
  if (controls.cols() > 0) require_same_length(n, static_cast<std::size_t>(controls.rows()));
  require_min_obs(n, 10);
  if (!(options.ci_level > 0.0 && options.ci_level < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "confidence level must lie in (0, 1)");
  }

  const auto N = static_cast<Eigen::Index>(n);
  const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(treatment.data(), N);
  const Eigen::VectorXd m = Eigen::Map<const Eigen::VectorXd>(mediator.data(), N);
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(outcome.data(), N);
  const Eigen::MatrixXd ctrl = controls.cols() > 0 ? controls : Eigen::MatrixXd(N, 0);

  const auto point = mediation_point(t, m, y, ctrl);

  const std::size_t B = options.n_boot;
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  std::vector<PointEffects> reps(B, PointEffects{kNaN, kNaN});
  auto run = [&](std::size_t worker, std::size_t stride) {
    Eigen::VectorXd tb(N), mb(N), yb(N);
    Eigen::MatrixXd cb(N, ctrl.cols());
    for (std::size_t r = worker; r < B; r += stride) {
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
      std::mt19937_64 rng(seq);
      std::uniform_int_distribution<Eigen::Index> pick(0, N - 1);
      for (Eigen::Index i = 0; i < N; ++i) {
        const auto s = pick(rng);
        tb(i) = t(s);
        mb(i) = m(s);
        yb(i) = y(s);
        if (ctrl.cols() > 0) cb.row(i) = ctrl.row(s);
      }
      try {
        reps[r] = mediation_point(tb, mb, yb, cb);
      } catch (const Error&) {
        // degenerate resample; left as NaN and excluded
      }
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, std::max<std::size_t>(B, 1)));
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
  }

  std::vector<double> acme, ade, total;
  for (const auto& r : reps) {
    if (std::isnan(r.acme) || std::isnan(r.ade)) continue;
    acme.push_back(r.acme);
    ade.push_back(r.ade);
    total.push_back(r.acme + r.ade);
  }

  MediationResult out;
  out.n_obs = n;
  out.n_boot_used = acme.size();
  out.acme = summarize(point.acme, std::move(acme), options.ci_level);
  out.ade = summarize(point.ade, std::move(ade), options.ci_level);
  out.total = summarize(point.acme + point.ade, std::move(total), options.ci_level);
  return out;
}

}  // namespace culturenov::stats
