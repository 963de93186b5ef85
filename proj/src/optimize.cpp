#include "elmiss/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "elmiss/error.hpp"

namespace elmiss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sanitize(double v) { return std::isfinite(v) ? v : kInf; }

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& objective, const Vec& x0,
                             const Vec& step, int max_evaluations, double ftol, double xtol) {
  const auto dim = x0.size();
  std::vector<Vec> simplex(dim + 1, x0);
  std::vector<double> values(dim + 1);
  int evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    return sanitize(objective(x));
  };
  values[0] = eval(x0);
  for (Eigen::Index k = 0; k < dim; ++k) {
    simplex[k + 1][k] += step[k];
    values[k + 1] = eval(simplex[k + 1]);
  }

  std::vector<std::size_t> order(dim + 1);
  bool converged = false;
  while (evals < max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= static_cast<std::size_t>(dim); ++i) {
      diameter = std::max(diameter, (simplex[i] - simplex[best]).lpNorm<Eigen::Infinity>());
    }
    const double spread = values[worst] - values[best];
    if (std::isfinite(values[worst]) && spread <= ftol * (1.0 + std::abs(values[best])) &&
        diameter <= xtol * (1.0 + simplex[best].lpNorm<Eigen::Infinity>())) {
      converged = true;
      break;
    }

    Vec centroid = Vec::Zero(dim);
    for (std::size_t i = 0; i <= static_cast<std::size_t>(dim); ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= static_cast<double>(dim);

    const Vec reflected = centroid + (centroid - simplex[worst]);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      const Vec expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = evals < max_evaluations ? eval(expanded) : kInf;
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Vec contracted = outside ? Vec(centroid + 0.5 * (reflected - centroid))
                                   : Vec(centroid + 0.5 * (simplex[worst] - centroid));
    const double fc = eval(contracted);
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    // Shrink towards the best vertex.
    for (std::size_t i = 0; i <= static_cast<std::size_t>(dim); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      values[i] = eval(simplex[i]);
      if (evals >= max_evaluations) break;
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best = static_cast<std::size_t>(best_it - values.begin());
  return {simplex[best], values[best], evals, converged};
}

namespace {

// Tableau with m constraint rows and an objective row; column `cols` holds
// the right-hand side.
struct Tableau {
  Mat t;
  std::vector<Eigen::Index> basis;

  Eigen::Index rows() const { return t.rows() - 1; }
  Eigen::Index cols() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Minimizes the objective row over columns [0, active_cols). Returns false
  // when unbounded.
  bool optimize(Eigen::Index active_cols, double tol) {
    const Eigen::Index obj = rows();
    for (int iter = 0; iter < 100000; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < active_cols; ++j) {
        if (t(obj, j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best_ratio = kInf;
      for (Eigen::Index i = 0; i < obj; ++i) {
        if (t(i, enter) > tol) {
          const double ratio = t(i, cols()) / t(i, enter);
          if (ratio < best_ratio - tol ||
              (std::abs(ratio - best_ratio) <= tol && leave >= 0 &&
               basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw NumericalError("simplex iteration limit reached");
  }
};

}  // namespace

LpResult solve_lp(const Mat& A, const Vec& b, const Vec& c, double tol) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (b.size() != m || c.size() != n) throw DataError("solve_lp: dimension mismatch");

  // Columns: [x (n) | artificials (m) | rhs].
  Tableau tab;
  tab.t = Mat::Zero(m + 1, n + m + 1);
  tab.basis.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    tab.t.row(i).head(n) = sign * A.row(i);
    tab.t(i, n + i) = 1.0;
    tab.t(i, n + m) = sign * b[i];
    tab.basis[static_cast<std::size_t>(i)] = n + i;
  }
  // Phase 1 objective: sum of artificials, expressed in non-basic terms.
  for (Eigen::Index i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i);
  for (Eigen::Index i = 0; i < m; ++i) tab.t(m, n + i) = 0.0;
  tab.optimize(n + m, tol);

  const double scale = 1.0 + b.lpNorm<Eigen::Infinity>();
  if (-tab.t(m, n + m) > tol * scale) return {LpStatus::infeasible, Vec(), 0.0};

  // Drive remaining artificials out of the basis where possible.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab.t(i, j)) > tol) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2: real objective, artificial columns frozen out.
  tab.t.row(m).setZero();
  tab.t.row(m).head(n) = c.transpose();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bcol = tab.basis[static_cast<std::size_t>(i)];
    if (bcol < n && tab.t(m, bcol) != 0.0) tab.t.row(m) -= tab.t(m, bcol) * tab.t.row(i);
  }
  for (Eigen::Index i = 0; i < m; ++i) tab.t.col(n + i).setZero();
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bcol = tab.basis[static_cast<std::size_t>(i)];
    if (bcol >= n) tab.t(i, bcol) = 1.0;  // redundant row, artificial stays at zero
  }
  if (!tab.optimize(n, tol)) return {LpStatus::unbounded, Vec(), -kInf};

  Vec x = Vec::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bcol = tab.basis[static_cast<std::size_t>(i)];
    if (bcol < n) x[bcol] = tab.t(i, n + m);
  }
  return {LpStatus::optimal, x, c.dot(x)};
}

}  // namespace elmiss
