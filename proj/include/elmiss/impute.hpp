#pragma once

#include <optional>
#include <string>
#include <utility>

#include "elmiss/el_core.hpp"
#include "elmiss/estimators.hpp"

namespace elmiss {

enum class BandwidthRule { fixed, n_pow };

struct KernelConfig {
  BandwidthRule rule = BandwidthRule::n_pow;
  // Used when rule == fixed.
  double bandwidth = 1.0;
  double pi_floor = 0.05;

  // h = n^(-1/7) for n_pow, the fixed value otherwise.
  double resolve_bandwidth(std::size_t n) const;
};

std::string to_string(BandwidthRule rule);
BandwidthRule parse_bandwidth_rule(const std::string& name);

// K(u) = 0.75 (1 - u^2) on |u| <= 1.
double epanechnikov(double u);

struct PiHat {
  Vec values;
  double floor = 0.05;
  double bandwidth = 0.0;
  // Rows whose raw estimate fell below `floor` and were raised to it.
  std::size_t clamped = 0;
};

// pi_hat(X_j) = sum_i delta_i K((X_i - X_j)/h) / max{1, sum_i K((X_i - X_j)/h)},
// clamped to [floor, 1]. p > 1 uses a product kernel (experimental).
PiHat estimate_pi(const ObservedDataset& data, const KernelConfig& cfg);

struct ImputedDataset {
  std::vector<Vec> x;
  std::vector<std::optional<double>> y_observed;
  Vec y_tilde;
  FitResult source_fit;
  PiHat pi_hat;

  std::size_t n() const { return x.size(); }
};

// Y_{n,i} = f(X_i; b) + delta_i / pi_hat_i (Y_i - f(X_i; b)), algebraically
// the inverse-probability-weighted combination of Y_i and the LS forecast.
// Throws UnsupportedMethodError unless fit.method is LS.
ImputedDataset impute_responses(const ObservedDataset& data, const RegressionModel& model,
                                const FitResult& fit, const PiHat& pi);

// Rows (Y_{n,i} - f(X_i, beta)) fdot(X_i, beta), kind IMPUTED.
ScoreMatrix build_scores_imputed(const ImputedDataset& imp, const RegressionModel& model,
                                 const Vec& beta);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double v) const { return lower <= v && v <= upper; }
};

// {theta : el_mean_statistic(y_tilde, theta) <= chi2_1 quantile at level},
// by bisection on each side of the sample mean.
Interval mean_response_ci(const ImputedDataset& imp, double level);
Interval mean_ci(const Vec& values, double level);

}  // namespace elmiss
