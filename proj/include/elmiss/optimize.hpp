#pragma once

#include <functional>

#include "elmiss/model.hpp"

namespace elmiss {

struct NelderMeadResult {
  Vec x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Derivative-free minimization. Non-finite objective values are treated as
// +inf, so infeasible points are simply never accepted as best. The initial
// simplex is x0 + step[k] e_k. Stops after `max_evaluations` or when the
// spread of simplex values falls below ftol * (1 + |best|) and the simplex
// diameter below xtol.
NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& objective, const Vec& x0,
                             const Vec& step, int max_evaluations, double ftol = 1e-15,
                             double xtol = 1e-13);

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vec x;
  double objective = 0.0;
};

// Dense two-phase simplex with Bland's rule for
//   minimize c^T x  subject to  A x = b,  x >= 0.
LpResult solve_lp(const Mat& A, const Vec& b, const Vec& c, double tol = 1e-10);

}  // namespace elmiss
