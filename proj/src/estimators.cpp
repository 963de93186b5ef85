#include "elmiss/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <fmt/format.h>

#include "elmiss/error.hpp"
#include "elmiss/optimize.hpp"

namespace elmiss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct CompleteCases {
  std::vector<Vec> x;
  Vec y;
};

CompleteCases complete_cases(const ObservedDataset& data) {
  CompleteCases cc;
  std::vector<double> ys;
  for (const auto& row : data.rows) {
    if (!row.observed()) continue;
    cc.x.push_back(row.x);
    ys.push_back(*row.y);
  }
  cc.y = Eigen::Map<const Vec>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  return cc;
}

// Residuals (and optionally the Jacobian of f) at beta. Returns false when
// beta is singular for some case or anything is non-finite.
bool evaluate(const RegressionModel& model, const CompleteCases& cc, const Vec& beta, Vec& r,
              Mat* jac) {
  const auto m = static_cast<Eigen::Index>(cc.x.size());
  r.resize(m);
  if (jac) jac->resize(m, model.d());
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& x = cc.x[static_cast<std::size_t>(i)];
    if (model.is_singular(x, beta)) return false;
    r[i] = cc.y[i] - model.value(x, beta);
    if (jac) jac->row(i) = model.gradient(x, beta).transpose();
  }
  return r.allFinite() && (!jac || jac->allFinite());
}

void check_fit_inputs(const CompleteCases& cc, const RegressionModel& model, const Vec& init) {
  if (init.size() != model.d()) {
    throw DataError(fmt::format("init has {} components, model '{}' needs {}", init.size(),
                                model.name(), model.d()));
  }
  if (cc.x.size() < static_cast<std::size_t>(model.d())) {
    throw InsufficientDataError(fmt::format("{} complete cases, need at least {}", cc.x.size(),
                                            model.d()));
  }
  for (const auto& x : cc.x) model.require_regular(x, init);
}

// Least-squares solution of [W^1/2 J; (mu D)^1/2] step = [W^1/2 r; 0] with D
// the floored diagonal of J^T W J (Marquardt scaling). QR avoids squaring the
// condition number of J.
Vec damped_step(const Mat& jac, const Vec& weights, const Vec& r, double mu) {
  const Eigen::Index m = jac.rows();
  const Eigen::Index p = jac.cols();
  const Vec sw = weights.cwiseSqrt();
  Mat aug = Mat::Zero(m + p, p);
  aug.topRows(m) = sw.asDiagonal() * jac;
  Vec rhs = Vec::Zero(m + p);
  rhs.head(m) = sw.cwiseProduct(r);
  const Vec diag = aug.topRows(m).colwise().squaredNorm().transpose();
  const double floor = 1e-12 * std::max(diag.maxCoeff(), 1e-300);
  for (Eigen::Index k = 0; k < p; ++k) {
    aug(m + k, k) = std::sqrt(mu * std::max(diag[k], floor));
  }
  return aug.colPivHouseholderQr().solve(rhs);
}

// Newton solve of r_j(beta) = 0 on the d cases with the smallest residuals:
// a generic LAD optimum interpolates d points exactly.
std::optional<Vec> refine_vertex(const RegressionModel& model, const CompleteCases& cc,
                                 Vec beta) {
  const int d = model.d();
  Vec r;
  if (!evaluate(model, cc, beta, r, nullptr)) return std::nullopt;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(r.size()));
  for (Eigen::Index i = 0; i < r.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::partial_sort(order.begin(), order.begin() + d, order.end(),
                    [&](Eigen::Index a, Eigen::Index b) { return std::abs(r[a]) < std::abs(r[b]); });
  CompleteCases sub;
  sub.y.resize(d);
  for (int j = 0; j < d; ++j) {
    const auto idx = order[static_cast<std::size_t>(j)];
    sub.x.push_back(cc.x[static_cast<std::size_t>(idx)]);
    sub.y[j] = cc.y[idx];
  }
  Vec rz;
  Mat jz;
  for (int iter = 0; iter < 30; ++iter) {
    if (!evaluate(model, sub, beta, rz, &jz)) return std::nullopt;
    if (rz.cwiseAbs().maxCoeff() <= 1e-14 * (1.0 + sub.y.cwiseAbs().maxCoeff())) return beta;
    const auto lu = jz.fullPivLu();
    if (!lu.isInvertible()) return std::nullopt;
    beta += lu.solve(rz);
  }
  return std::nullopt;
}

double sum_abs(const Vec& r) { return r.cwiseAbs().sum(); }

}  // namespace

std::string to_string(FitMethod method) {
  switch (method) {
    case FitMethod::ls: return "LS";
    case FitMethod::lad: return "LAD";
    case FitMethod::mele: return "MELE";
  }
  return "?";
}

double ls_objective(const ObservedDataset& data, const RegressionModel& model, const Vec& beta) {
  Vec r;
  if (!evaluate(model, complete_cases(data), beta, r, nullptr)) return kInf;
  return r.squaredNorm();
}

double lad_objective(const ObservedDataset& data, const RegressionModel& model, const Vec& beta) {
  Vec r;
  if (!evaluate(model, complete_cases(data), beta, r, nullptr)) return kInf;
  return sum_abs(r);
}

FitResult fit_ls(const ObservedDataset& data, const RegressionModel& model, const Vec& init) {
  const auto cc = complete_cases(data);
  check_fit_inputs(cc, model, init);
  constexpr int kMaxIterations = 200;

  FitResult fit;
  fit.method = FitMethod::ls;
  Vec beta = init;
  Vec r;
  Mat jac;
  if (!evaluate(model, cc, beta, r, &jac)) {
    throw NumericalError("LS objective is not finite at the initial point");
  }
  double objective = r.squaredNorm();
  const Vec unit = Vec::Ones(r.size());
  double mu = 1e-3;
  int iter = 0;
  auto gradient_small = [&] {
    return 2.0 * (jac.transpose() * r).norm() <= 1e-8 * (1.0 + objective);
  };
  // One iteration is one accepted step; rejected trials only raise mu.
  bool stuck = false;
  while (iter < kMaxIterations && !stuck && !gradient_small()) {
    ++iter;
    while (true) {
      const Vec step = damped_step(jac, unit, r, mu);
      const Vec trial = beta + step;
      Vec trial_r;
      Mat trial_jac;
      const bool ok = step.allFinite() && evaluate(model, cc, trial, trial_r, &trial_jac);
      const double trial_obj = ok ? trial_r.squaredNorm() : kInf;
      // Near the optimum the decrease drops below rounding in the objective,
      // so a step that leaves it flat but shrinks the gradient is also taken.
      const bool flat_but_better =
          ok && trial_obj <= objective * (1.0 + 1e-13) &&
          (trial_jac.transpose() * trial_r).norm() < (jac.transpose() * r).norm();
      if (trial_obj < objective || flat_but_better) {
        stuck = objective - trial_obj <= 1e-15 * objective &&
                step.norm() <= 1e-14 * (1.0 + beta.norm());
        beta = trial;
        r = std::move(trial_r);
        jac = std::move(trial_jac);
        objective = trial_obj;
        mu = std::max(mu / 10.0, 1e-12);
        break;
      }
      mu *= 10.0;
      if (mu > 1e16) {
        stuck = true;
        break;
      }
    }
  }
  fit.beta = beta;
  fit.iterations = iter;
  fit.objective = objective;
  fit.residuals = r;
  fit.converged = gradient_small();
  return fit;
}

FitResult fit_lad(const ObservedDataset& data, const RegressionModel& model, const Vec& init) {
  const auto cc = complete_cases(data);
  check_fit_inputs(cc, model, init);
  constexpr int kMaxIrls = 200;
  constexpr int kPolishEvaluations = 500;
  constexpr int kRestarts = 10;
  constexpr int kRestartRounds = 3;

  Vec beta = init;
  Vec r;
  Mat jac;
  if (!evaluate(model, cc, beta, r, &jac)) {
    throw NumericalError("LAD objective is not finite at the initial point");
  }
  double objective = sum_abs(r);
  double mu = 1e-3;
  int iter = 0;
  while (iter < kMaxIrls) {
    ++iter;
    const Vec weights = r.cwiseAbs().cwiseMax(1e-6).cwiseInverse();
    const Vec step = damped_step(jac, weights, r, mu);
    const Vec trial = beta + step;
    Vec trial_r;
    Mat trial_jac;
    const bool ok = step.allFinite() && evaluate(model, cc, trial, trial_r, &trial_jac);
    const double trial_obj = ok ? sum_abs(trial_r) : kInf;
    if (trial_obj < objective) {
      const bool negligible = objective - trial_obj <= 1e-14 * (1.0 + objective);
      beta = trial;
      r = std::move(trial_r);
      jac = std::move(trial_jac);
      objective = trial_obj;
      mu = std::max(mu / 10.0, 1e-12);
      if (negligible) break;
    } else {
      mu *= 10.0;
      if (mu > 1e12) break;
    }
  }

  // Polish: LAD optima sit on kinks of the objective where IRLS creeps.
  auto l1 = [&](const Vec& b) {
    Vec rr;
    return evaluate(model, cc, b, rr, nullptr) ? sum_abs(rr) : kInf;
  };
  Vec scale(beta.size());
  for (Eigen::Index k = 0; k < beta.size(); ++k) {
    scale[k] = 1e-4 * std::max(std::abs(beta[k]), 1e-2);
  }
  auto adopt = [&](const Vec& b, double value) {
    if (value < objective) {
      beta = b;
      objective = value;
    }
  };
  {
    const auto polish = nelder_mead(l1, beta, scale, kPolishEvaluations);
    adopt(polish.x, polish.value);
  }
  if (auto vertex = refine_vertex(model, cc, beta)) adopt(*vertex, l1(*vertex));

  // Accept the point only if perturbed local restarts cannot beat it.
  std::mt19937_64 engine(0x1adf17u);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  bool settled = false;
  for (int round = 0; round < kRestartRounds && !settled; ++round) {
    settled = true;
    const Vec centre = beta;
    const double reference = objective;
    for (int k = 0; k < kRestarts; ++k) {
      Vec start = centre;
      for (Eigen::Index j = 0; j < start.size(); ++j) start[j] += 10.0 * scale[j] * unit(engine);
      const auto local = nelder_mead(l1, start, scale, kPolishEvaluations);
      if (local.value < reference - 1e-8) settled = false;
      adopt(local.x, local.value);
    }
    if (!settled) {
      if (auto vertex = refine_vertex(model, cc, beta)) adopt(*vertex, l1(*vertex));
    }
  }
  evaluate(model, cc, beta, r, nullptr);

  FitResult fit;
  fit.method = FitMethod::lad;
  fit.beta = beta;
  fit.iterations = iter;
  fit.objective = objective;
  fit.residuals = r;
  fit.converged = settled && std::isfinite(objective);
  return fit;
}

FitResult fit_lad_linear_exact(const ObservedDataset& data) {
  const auto cc = complete_cases(data);
  if (cc.x.empty()) throw InsufficientDataError("no complete cases");
  const auto m = static_cast<Eigen::Index>(cc.x.size());
  const auto d = cc.x.front().size();
  if (m < d) throw InsufficientDataError("fewer complete cases than parameters");

  // Variables [beta+ (d) | beta- (d) | u (m) | v (m)], X beta + u - v = y.
  Mat A = Mat::Zero(m, 2 * d + 2 * m);
  Vec c = Vec::Zero(2 * d + 2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& x = cc.x[static_cast<std::size_t>(i)];
    A.row(i).segment(0, d) = x.transpose();
    A.row(i).segment(d, d) = -x.transpose();
    A(i, 2 * d + i) = 1.0;
    A(i, 2 * d + m + i) = -1.0;
  }
  c.tail(2 * m).setOnes();
  const auto lp = solve_lp(A, cc.y, c);
  if (lp.status != LpStatus::optimal) throw NumericalError("L1 linear program failed");

  FitResult fit;
  fit.method = FitMethod::lad;
  fit.beta = lp.x.segment(0, d) - lp.x.segment(d, d);
  fit.converged = true;
  fit.residuals.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    fit.residuals[i] = cc.y[i] - cc.x[static_cast<std::size_t>(i)].dot(fit.beta);
  }
  fit.objective = sum_abs(fit.residuals);
  return fit;
}

AsymptoticMatrices estimate_moment_matrices(const ObservedDataset& data,
                                            const RegressionModel& model, const Vec& beta) {
  AsymptoticMatrices out;
  out.A = Mat::Zero(model.d(), model.d());
  out.B = Mat::Zero(model.d(), model.d());
  if (data.rows.empty()) return out;
  for (const auto& row : data.rows) {
    if (!row.observed()) continue;
    const Vec g = model.gradient(row.x, beta);
    const double r = *row.y - model.value(row.x, beta);
    const Mat outer = g * g.transpose();
    out.A += outer;
    out.B += r * r * outer;
    ++out.n_complete;
  }
  const double n = static_cast<double>(data.rows.size());
  out.A /= n;
  out.B /= n;
  return out;
}

namespace {

// Eigenvalue-based definiteness check for small symmetric matrices.
bool positive_definite(const Mat& M) {
  if (M.rows() == 0 || !M.allFinite()) return false;
  const Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (M + M.transpose()),
                                               Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return ev.minCoeff() > 1e-13 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace

double normal_stat_ls(const Vec& beta_hat, const Vec& beta0, const Mat& A, const Mat& B,
                      std::size_t n) {
  const Vec diff = beta_hat - beta0;
  if ((diff.array() == 0.0).all()) return 0.0;
  if (!positive_definite(B)) throw NumericalError("B matrix is singular");
  const Vec a_diff = A * diff;
  return static_cast<double>(n) * a_diff.dot(B.ldlt().solve(a_diff));
}

double normal_stat_lad(const Vec& beta_hat, const Vec& beta0, const Mat& A, double e0,
                       std::size_t n) {
  const Vec diff = beta_hat - beta0;
  if ((diff.array() == 0.0).all()) return 0.0;
  if (!(e0 > 0.0)) throw NumericalError("density at zero must be positive");
  if (!positive_definite(A)) throw NumericalError("A matrix is not positive definite");
  return 4.0 * static_cast<double>(n) * e0 * e0 * diff.dot(A * diff);
}

}  // namespace elmiss
