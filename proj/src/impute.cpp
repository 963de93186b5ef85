#include "elmiss/impute.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "elmiss/chi2.hpp"
#include "elmiss/error.hpp"

namespace elmiss {

double KernelConfig::resolve_bandwidth(std::size_t n) const {
  if (rule == BandwidthRule::fixed) {
    if (!(bandwidth > 0.0)) throw DataError("bandwidth must be positive");
    return bandwidth;
  }
  return std::pow(static_cast<double>(n), -1.0 / 7.0);
}

std::string to_string(BandwidthRule rule) {
  return rule == BandwidthRule::fixed ? "fixed" : "n_pow";
}

BandwidthRule parse_bandwidth_rule(const std::string& name) {
  if (name == "fixed") return BandwidthRule::fixed;
  if (name == "n_pow") return BandwidthRule::n_pow;
  throw DataError(fmt::format("unknown bandwidth rule '{}'", name));
}

double epanechnikov(double u) { return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0; }

PiHat estimate_pi(const ObservedDataset& data, const KernelConfig& cfg) {
  data.validate();
  if (!(cfg.pi_floor > 0.0 && cfg.pi_floor <= 1.0)) throw DataError("pi floor must be in (0, 1]");
  const std::size_t n = data.n();
  const double h = cfg.resolve_bandwidth(n);

  PiHat out;
  out.floor = cfg.pi_floor;
  out.bandwidth = h;
  out.values.resize(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const Vec& at = data.rows[j].x;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double k = 1.0;
      for (Eigen::Index c = 0; c < at.size() && k > 0.0; ++c) {
        k *= epanechnikov((data.rows[i].x[c] - at[c]) / h);
      }
      den += k;
      if (data.rows[i].observed()) num += k;
    }
    double v = num / std::max(1.0, den);
    if (v < cfg.pi_floor) {
      v = cfg.pi_floor;
      ++out.clamped;
    }
    out.values[static_cast<Eigen::Index>(j)] = std::min(v, 1.0);
  }
  return out;
}

ImputedDataset impute_responses(const ObservedDataset& data, const RegressionModel& model,
                                const FitResult& fit, const PiHat& pi) {
  if (fit.method != FitMethod::ls) {
    throw UnsupportedMethodError("imputation needs an LS fit (" + to_string(fit.method) +
                                 " given)");
  }
  if (static_cast<std::size_t>(pi.values.size()) != data.n()) {
    throw DataError("pi_hat length does not match the dataset");
  }
  ImputedDataset imp;
  imp.source_fit = fit;
  imp.pi_hat = pi;
  imp.y_tilde.resize(static_cast<Eigen::Index>(data.n()));
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto& row = data.rows[i];
    const double forecast = model.value(row.x, fit.beta);
    double y = forecast;
    if (row.observed()) y += (*row.y - forecast) / pi.values[static_cast<Eigen::Index>(i)];
    imp.x.push_back(row.x);
    imp.y_observed.push_back(row.y);
    imp.y_tilde[static_cast<Eigen::Index>(i)] = y;
  }
  return imp;
}

ScoreMatrix build_scores_imputed(const ImputedDataset& imp, const RegressionModel& model,
                                 const Vec& beta) {
  ScoreMatrix out;
  out.kind = ScoreKind::imputed;
  out.g.resize(static_cast<Eigen::Index>(imp.n()), model.d());
  for (std::size_t i = 0; i < imp.n(); ++i) {
    const auto& x = imp.x[i];
    const double r = imp.y_tilde[static_cast<Eigen::Index>(i)] - model.value(x, beta);
    out.g.row(static_cast<Eigen::Index>(i)) = r * model.gradient(x, beta).transpose();
  }
  return out;
}

Interval mean_ci(const Vec& values, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DataError("level must be in (0, 1)");
  if (values.size() < 2) throw InsufficientDataError("mean CI needs at least two values");
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  if (lo == hi) return {lo, hi};
  const double mean = values.mean();
  const double cutoff = chi2_quantile(level, 1.0);
  auto inside = [&](double theta) {
    const auto ev = el_mean_statistic(values, theta);
    return ev.ok() && ev.statistic <= cutoff;
  };
  // Bisect between the mean (statistic 0) and a hull endpoint (statistic +inf).
  auto edge = [&](double a, double b) {
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (a + b);
      if (mid == a || mid == b) break;
      (inside(mid) ? a : b) = mid;
      if (std::abs(b - a) <= 1e-13 * (1.0 + std::abs(mean))) break;
    }
    return a;
  };
  return {edge(mean, lo), edge(mean, hi)};
}

Interval mean_response_ci(const ImputedDataset& imp, double level) {
  return mean_ci(imp.y_tilde, level);
}

}  // namespace elmiss
