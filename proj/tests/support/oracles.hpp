#pragma once

// Reference computations written independently of the library's solvers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Root of sum g_i / (1 + lam g_i) on (-1/max g, -1/min g) by bisection; the
// function is strictly decreasing there.
inline double dual_root_1d(const std::vector<double>& g) {
  const double gmax = *std::max_element(g.begin(), g.end());
  const double gmin = *std::min_element(g.begin(), g.end());
  double lo = -1.0 / gmax;
  double hi = -1.0 / gmin;
  auto score = [&](double lam) {
    double s = 0.0;
    for (double gi : g) s += gi / (1.0 + lam * gi);
    return s;
  };
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (score(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double el_stat_1d(const std::vector<double>& g) {
  const double lam = dual_root_1d(g);
  double s = 0.0;
  for (double gi : g) s += 2.0 * std::log1p(lam * gi);
  return s;
}

// max sum log(n p_i) over {p > 0, sum p = 1, sum p_i g_i = 0} for scalar g,
// by Newton's method in the null space of the constraints (primal route).
// Returns -2 times the maximum.
inline double el_stat_primal_1d(const std::vector<double>& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd C(2, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    C(0, i) = 1.0;
    C(1, i) = g[static_cast<std::size_t>(i)];
  }
  // Null-space basis from the full QR of C^T.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(C.transpose());
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd N = Q.rightCols(n - 2);

  // Strictly positive feasible start: mostly a two-point mass on the extreme
  // values, mixed with the uniform weights.
  const auto a = std::min_element(g.begin(), g.end()) - g.begin();
  const auto b = std::max_element(g.begin(), g.end()) - g.begin();
  double gbar = 0.0;
  for (double gi : g) gbar += gi / static_cast<double>(n);
  // Mixing weight eps chosen so that the two-point target stays inside
  // [min g, max g] with room to spare.
  const double room = std::min(-g[static_cast<std::size_t>(a)], g[static_cast<std::size_t>(b)]);
  const double ratio = gbar == 0.0 ? 1.0 : std::min(1.0, 0.5 * room / std::abs(gbar));
  const double eps = 1.0 / (1.0 + ratio);
  const double target = -(1.0 - eps) / eps * gbar;
  const double wb = (target - g[static_cast<std::size_t>(a)]) /
                    (g[static_cast<std::size_t>(b)] - g[static_cast<std::size_t>(a)]);
  Eigen::VectorXd p = Eigen::VectorXd::Constant(n, (1.0 - eps) / static_cast<double>(n));
  p[a] += eps * (1.0 - wb);
  p[b] += eps * wb;

  auto objective = [](const Eigen::VectorXd& q) {
    if (q.minCoeff() <= 0.0) return -std::numeric_limits<double>::infinity();
    return q.array().log().sum();
  };
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd grad = N.transpose() * p.cwiseInverse();
    const Eigen::MatrixXd hess =
        -N.transpose() * p.cwiseInverse().cwiseAbs2().asDiagonal() * N;
    const Eigen::VectorXd step = hess.ldlt().solve(-grad);
    const double decrement = grad.dot(step);
    if (decrement < 1e-26) break;
    double t = 1.0;
    const double f0 = objective(p);
    while (t > 1e-20) {
      const Eigen::VectorXd trial = p + t * (N * step);
      if (objective(trial) >= f0 + 0.25 * t * grad.dot(step)) {
        p = trial;
        break;
      }
      t *= 0.5;
    }
  }
  return -2.0 * (objective(p) + static_cast<double>(n) * std::log(static_cast<double>(n)));
}

// d = 2 dual maximization of F(lam) = sum log(1 + lam^T g_i) by nested 1-d
// searches: h(a) = max_b F(a, b) is concave, the inner maximum is found by
// bisection on dF/db, the outer by a grid bracket then golden section.
inline double el_stat_2d(const Eigen::MatrixXd& g) {
  const auto n = g.rows();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  auto F = [&](double a, double b) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = 1.0 + a * g(i, 0) + b * g(i, 1);
      if (t <= 0.0) return kNegInf;
      s += std::log(t);
    }
    return s;
  };
  auto h = [&](double a) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double c = 1.0 + a * g(i, 0);
      const double w = g(i, 1);
      if (w > 0.0) lo = std::max(lo, -c / w);
      if (w < 0.0) hi = std::min(hi, -c / w);
      if (w == 0.0 && c <= 0.0) return kNegInf;
    }
    if (!(lo < hi)) return kNegInf;
    auto partial = [&](double b) {
      double s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) s += g(i, 1) / (1.0 + a * g(i, 0) + b * g(i, 1));
      return s;
    };
    for (int it = 0; it < 400; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (partial(mid) > 0.0) lo = mid; else hi = mid;
    }
    return F(a, 0.5 * (lo + hi));
  };

  // The feasible polygon {lam : 1 + lam^T g_i >= 0} is bounded when the origin
  // is interior to the hull; its lam_0 range comes from the vertices.
  double amin = std::numeric_limits<double>::infinity();
  double amax = -amin;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double det = g(i, 0) * g(j, 1) - g(i, 1) * g(j, 0);
      if (det == 0.0) continue;
      const double a = (-g(j, 1) + g(i, 1)) / det;
      const double b = (-g(i, 0) + g(j, 0)) / det;
      bool feasible = true;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (1.0 + a * g(k, 0) + b * g(k, 1) < -1e-12) feasible = false;
      }
      if (!feasible) continue;
      amin = std::min(amin, a);
      amax = std::max(amax, a);
    }
  }
  const int steps = 2000;
  const double width = (amax - amin) / steps;
  int best = -1;
  double hbest = kNegInf;
  for (int i = 1; i < steps; ++i) {
    const double v = h(amin + width * i);
    if (v > hbest) {
      hbest = v;
      best = i;
    }
  }
  double lo = amin + width * (best - 1);
  double hi = amin + width * (best + 1);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double h1 = h(x1);
  double h2 = h(x2);
  for (int it = 0; it < 300 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    if (h1 < h2) {
      lo = x1;
      x1 = x2;
      h1 = h2;
      x2 = lo + phi * (hi - lo);
      h2 = h(x2);
    } else {
      hi = x2;
      x2 = x1;
      h2 = h1;
      x1 = hi - phi * (hi - lo);
      h1 = h(x1);
    }
  }
  return 2.0 * std::max({h1, h2, hbest});
}

// Strict containment of the origin in the convex hull of planar points:
// every angular gap between consecutive directions is below pi.
inline bool origin_strictly_inside_2d(const Eigen::MatrixXd& g, double margin = 0.0) {
  std::vector<double> angles;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    if (g.row(i).norm() > 0.0) angles.push_back(std::atan2(g(i, 1), g(i, 0)));
  }
  if (angles.size() < 3) return false;
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2.0 * M_PI - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
  return gap < M_PI - margin;
}

// One-sample Kolmogorov-Smirnov distance of `sample` to the cdf.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

}  // namespace oracle
