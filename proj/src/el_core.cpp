#include "elmiss/el_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "elmiss/error.hpp"
#include "elmiss/optimize.hpp"

namespace elmiss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::string to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::ls: return "LS";
    case ScoreKind::lad: return "LAD";
    case ScoreKind::imputed: return "IMPUTED";
    case ScoreKind::mean: return "MEAN";
  }
  return "?";
}

std::string to_string(ElStatus status) {
  switch (status) {
    case ElStatus::converged: return "converged";
    case ElStatus::hull_violation: return "hull_violation";
    case ElStatus::singular: return "singular";
    case ElStatus::iteration_limit: return "iteration_limit";
  }
  return "?";
}

ScoreMatrix build_scores(const ObservedDataset& data, const RegressionModel& model,
                         const Vec& beta, ScoreKind kind) {
  if (kind != ScoreKind::ls && kind != ScoreKind::lad) {
    throw UnsupportedMethodError("build_scores handles LS and LAD scores only");
  }
  ScoreMatrix out;
  out.kind = kind;
  out.g = Mat::Zero(static_cast<Eigen::Index>(data.n()), model.d());
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto& row = data.rows[i];
    model.require_regular(row.x, beta);
    if (!row.observed()) continue;
    const double r = *row.y - model.value(row.x, beta);
    const double weight = kind == ScoreKind::ls ? r : sign(r);
    out.g.row(static_cast<Eigen::Index>(i)) = weight * model.gradient(row.x, beta).transpose();
  }
  return out;
}

Mat moment_matrix(const ScoreMatrix& scores) {
  if (scores.n() == 0) return Mat::Zero(scores.d(), scores.d());
  return scores.g.transpose() * scores.g / static_cast<double>(scores.n());
}

bool origin_in_hull(const Mat& g) {
  std::vector<Eigen::Index> nonzero;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    if (g.row(i).lpNorm<Eigen::Infinity>() > 0.0) nonzero.push_back(i);
  }
  if (nonzero.empty()) return true;
  const auto d = g.cols();
  if (d == 1) {
    bool pos = false;
    bool neg = false;
    for (auto i : nonzero) {
      pos = pos || g(i, 0) > 0.0;
      neg = neg || g(i, 0) < 0.0;
    }
    return pos && neg;
  }
  // Find p >= 0 with sum p = 1 and sum p_i u_i = 0, u_i = g_i / ||g_i||.
  const auto m = static_cast<Eigen::Index>(nonzero.size());
  Mat A(d + 1, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Vec u = g.row(nonzero[static_cast<std::size_t>(j)]).transpose();
    A.col(j).head(d) = u / u.norm();
    A(d, j) = 1.0;
  }
  Vec b = Vec::Zero(d + 1);
  b[d] = 1.0;
  return solve_lp(A, b, Vec::Zero(m), 1e-11).status == LpStatus::optimal;
}

ElEvaluation solve_lambda(const ScoreMatrix& scores) {
  const Mat& g = scores.g;
  const auto n = g.rows();
  const auto d = g.cols();
  if (n < 1) throw DataError("solve_lambda needs at least one row");
  const double nd = static_cast<double>(n);

  ElEvaluation out;
  out.lambda = Vec::Zero(d);

  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if (g.cwiseAbs().maxCoeff() == 0.0) {
    // Every constraint holds with uniform weights.
    out.weights = Vec::Constant(n, 1.0 / nd);
    out.statistic = 0.0;
    return out;
  }
  const Mat gram = g.transpose() * g;
  {
    const Eigen::SelfAdjointEigenSolver<Mat> eig(gram, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 1e-13 * eig.eigenvalues().maxCoeff()) {
      out.status = ElStatus::singular;
      out.statistic = std::numeric_limits<double>::quiet_NaN();
      return out;
    }
  }
  if (!origin_in_hull(g)) {
    out.status = ElStatus::hull_violation;
    out.statistic = kInf;
    return out;
  }

  const double lower = 1.0 / nd;
  const double tol = 1e-10 * scale;
  Vec lambda = Vec::Zero(d);
  Vec denom = Vec::Ones(n);
  auto dual_value = [&](const Vec& dv) { return dv.array().log().sum(); };
  double value = 0.0;
  bool converged = false;
  int iter = 0;
  for (; iter < 100; ++iter) {
    const Vec inv = denom.cwiseInverse();
    const Vec grad = g.transpose() * inv;
    if (grad.norm() / nd <= tol) {
      converged = true;
      break;
    }
    const Mat hess = g.transpose() * inv.cwiseAbs2().asDiagonal() * g;
    const Vec step = hess.ldlt().solve(grad);
    if (!step.allFinite()) {
      out.status = ElStatus::singular;
      out.statistic = std::numeric_limits<double>::quiet_NaN();
      return out;
    }
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const Vec trial = lambda + t * step;
      const Vec trial_denom = Vec::Ones(n) + g * trial;
      if (trial_denom.minCoeff() < lower) continue;
      const double trial_value = dual_value(trial_denom);
      if (trial_value >= value - 1e-14 * (1.0 + std::abs(value))) {
        lambda = trial;
        denom = trial_denom;
        value = trial_value;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    // A diverging multiplier means the origin is on the hull boundary.
    if (denom.maxCoeff() > 1e15) break;
  }
  if (!converged) {
    const Vec grad = g.transpose() * denom.cwiseInverse();
    converged = grad.norm() / nd <= 1e2 * tol;
  }
  out.iterations = iter;
  out.lambda = lambda;
  if (!converged) {
    if (denom.maxCoeff() > 1e12) {
      out.status = ElStatus::hull_violation;
      out.statistic = kInf;
    } else {
      out.status = ElStatus::iteration_limit;
      out.statistic = 2.0 * value;
    }
    return out;
  }
  // Extra Newton steps near the root tighten sum p_i = 1 (its error is
  // lambda^T grad / n) at negligible cost.
  for (int polish = 0; polish < 2; ++polish) {
    const Vec inv = denom.cwiseInverse();
    const Vec grad = g.transpose() * inv;
    const Mat hess = g.transpose() * inv.cwiseAbs2().asDiagonal() * g;
    const Vec trial = lambda + hess.ldlt().solve(grad);
    const Vec trial_denom = Vec::Ones(n) + g * trial;
    if (!trial.allFinite() || trial_denom.minCoeff() < lower) break;
    if ((g.transpose() * trial_denom.cwiseInverse()).norm() >= grad.norm()) break;
    lambda = trial;
    denom = trial_denom;
  }
  out.lambda = lambda;
  out.weights = (nd * denom).cwiseInverse();
  out.statistic = 2.0 * (g * lambda).array().log1p().sum();
  return out;
}

ElEvaluation el_statistic(const ObservedDataset& data, const RegressionModel& model,
                          const Vec& beta, ScoreKind kind) {
  return solve_lambda(build_scores(data, model, beta, kind));
}

double el_statistic_approx(const ScoreMatrix& scores) {
  const Vec sum = scores.g.colwise().sum().transpose();
  if ((sum.array() == 0.0).all()) return 0.0;
  const Mat gram = scores.g.transpose() * scores.g;
  const Eigen::SelfAdjointEigenSolver<Mat> eig(gram, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 1e-13 * eig.eigenvalues().maxCoeff())) {
    throw NumericalError("score moment matrix B_n is singular");
  }
  return sum.dot(gram.ldlt().solve(sum));
}

ElEvaluation el_mean_statistic(const Vec& values, double theta0) {
  if (values.size() < 2) throw InsufficientDataError("mean EL needs at least two values");
  ScoreMatrix scores;
  scores.kind = ScoreKind::mean;
  scores.g = (values.array() - theta0).matrix();
  return solve_lambda(scores);
}

FitResult mele_fit(const ObservedDataset& data, const RegressionModel& model, const Vec& init,
                   ScoreKind kind) {
  if (data.complete_count() < static_cast<std::size_t>(model.d())) {
    throw InsufficientDataError("fewer complete cases than parameters");
  }
  if (init.size() != model.d()) throw DataError("init has the wrong dimension");
  constexpr int kBudget = 1000;
  double ymax = 0.0;
  for (const auto& row : data.rows) {
    if (row.observed()) ymax = std::max(ymax, std::abs(*row.y));
  }
  // A beta that interpolates every complete case has g_i = 0 up to rounding;
  // the hull test on rounding noise is meaningless there, and l_n = 0.
  auto interpolates = [&](const Vec& beta) {
    for (const auto& row : data.rows) {
      if (row.observed() && std::abs(*row.y - model.value(row.x, beta)) > 1e-10 * (1.0 + ymax)) {
        return false;
      }
    }
    return true;
  };
  auto objective = [&](const Vec& beta) {
    try {
      if (interpolates(beta)) return 0.0;
      const auto ev = el_statistic(data, model, beta, kind);
      return ev.ok() ? ev.statistic : kInf;
    } catch (const SingularParameterError&) {
      return kInf;
    }
  };
  auto initial_step = [](const Vec& x, double rel) {
    Vec s(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) s[k] = rel * std::max(std::abs(x[k]), 0.1);
    return s;
  };
  // An infeasible start (origin outside the score hull) gives Nelder-Mead
  // nothing to compare; the LS root from that start is always feasible.
  Vec start = init;
  if (!std::isfinite(objective(start))) {
    try {
      const auto ls = fit_ls(data, model, init);
      if (std::isfinite(objective(ls.beta))) start = ls.beta;
    } catch (const Error&) {
    }
  }
  auto best = nelder_mead(objective, start, initial_step(start, 0.05), kBudget, 0.0, 1e-12);
  int used = best.evaluations;
  if (used < kBudget && std::isfinite(best.value)) {
    auto again = nelder_mead(objective, best.x, initial_step(best.x, 1e-3), kBudget - used, 0.0,
                             1e-12);
    used += again.evaluations;
    if (again.value <= best.value) best = again;
  }
  // With as many estimating functions as parameters the minimum sits at the
  // root of sum g_i, which the matching M-estimator reaches far more tightly.
  if (std::isfinite(best.value) && (kind == ScoreKind::ls || kind == ScoreKind::lad)) {
    const std::vector<Vec> starts = {best.x, init};
    for (const auto& from : starts) {
      try {
        const auto root = kind == ScoreKind::ls ? fit_ls(data, model, from)
                                                : fit_lad(data, model, from);
        const double value = objective(root.beta);
        if (value < best.value) {
          best.x = root.beta;
          best.value = value;
        }
      } catch (const Error&) {
      }
    }
  }
  if (!std::isfinite(best.value)) {
    throw NumericalError("every evaluated parameter was infeasible for the EL statistic");
  }

  FitResult fit;
  fit.method = FitMethod::mele;
  fit.beta = best.x;
  fit.objective = best.value;
  fit.iterations = used;
  fit.converged = best.converged || best.value <= 1e-8;
  fit.residuals.resize(static_cast<Eigen::Index>(data.complete_count()));
  Eigen::Index k = 0;
  for (const auto& row : data.rows) {
    if (row.observed()) fit.residuals[k++] = *row.y - model.value(row.x, best.x);
  }
  return fit;
}

}  // namespace elmiss
