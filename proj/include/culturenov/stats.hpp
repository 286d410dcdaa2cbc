#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace culturenov::stats {

struct Correlation {
  double coefficient = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// Sample Pearson r with a two-sided t-test on n-2 degrees of freedom.
/// Throws LengthMismatch, InsufficientObservations (n < 3), ConstantSeries.
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b, O(n log n). p from the normal approximation with the
/// tie-adjusted variance. Throws LengthMismatch, InsufficientObservations, AllTied.
Correlation kendall_tau(std::span<const double> x, std::span<const double> y);

/// Extrapolated rank-biased overlap with persistence p. Lists may differ in
/// length; an empty list against a non-empty one scores 0.
/// Throws DuplicateIds, InvalidArgument (p outside (0, 1)).
double rbo(std::span<const std::string> a, std::span<const std::string> b, double p = 0.9);

/// Two-sided p-value of a t statistic.
double student_t_two_sided(double t, double dof);
/// Upper tail of F(d1, d2).
double f_upper_tail(double f, double d1, double d2);

enum class CovarianceType { Classical, HC1 };

struct RegressionResult {
  std::vector<std::string> terms;  // column names, intercept first when present
  Eigen::VectorXd coefficients;
  Eigen::VectorXd std_errors;
  Eigen::VectorXd t_stats;
  Eigen::VectorXd p_values;
  Eigen::VectorXd residuals;
  double r_squared = 0.0;
  double f_statistic = 0.0;
  double f_p_value = 1.0;
  std::size_t n_obs = 0;

  std::map<std::string, double> coefficient_map() const;
  double coefficient(const std::string& term) const;
  std::size_t index_of(const std::string& term) const;
};

/// Least squares by column-pivoted Householder QR.
/// `design` must include the intercept column; `terms` names every column.
/// Throws InsufficientObservations (rows <= cols), RankDeficient, LengthMismatch.
RegressionResult ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                     std::vector<std::string> terms,
                     CovarianceType cov = CovarianceType::Classical);

/// Prepends an intercept column named "const".
RegressionResult ols_with_intercept(const Eigen::MatrixXd& regressors, const Eigen::VectorXd& y,
                                    std::vector<std::string> names,
                                    CovarianceType cov = CovarianceType::Classical);

struct EffectEstimate {
  double estimate = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::optional<double> p_value;
};

struct MediationResult {
  EffectEstimate total;
  EffectEstimate acme;  // a * b
  EffectEstimate ade;   // c'
  std::size_t n_obs = 0;
  std::size_t n_boot_used = 0;  // replicates whose fits succeeded
};

struct MediationOptions {
  std::size_t n_boot = 1000;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  std::size_t workers = 1;
};

/// Linear product-of-coefficients mediation with a percentile bootstrap.
/// mediator ~ 1 + treatment + controls gives a; outcome ~ 1 + treatment +
/// mediator + controls gives c' and b. Replicate r draws from a generator
/// seeded by (seed, r), so results do not depend on `workers`.
MediationResult mediate(std::span<const double> treatment, std::span<const double> mediator,
                        std::span<const double> outcome, const Eigen::MatrixXd& controls,
                        const MediationOptions& options = {});

}  // namespace culturenov::stats
