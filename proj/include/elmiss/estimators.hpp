#pragma once

#include <string>

#include "elmiss/model.hpp"
#include "elmiss/sampling.hpp"

namespace elmiss {

enum class FitMethod { ls, lad, mele };

std::string to_string(FitMethod method);

struct FitResult {
  FitMethod method = FitMethod::ls;
  Vec beta;
  bool converged = false;
  int iterations = 0;
  // Sum of squared (LS) or absolute (LAD) complete-case residuals; the
  // attained EL statistic for MELE.
  double objective = 0.0;
  // Y_i - f(X_i, beta) for the complete cases, in row order.
  Vec residuals;
};

// Plug-in moment matrices
//   A = n^-1 sum delta_i fdot fdot^T,  B = n^-1 sum delta_i r_i^2 fdot fdot^T.
struct AsymptoticMatrices {
  Mat A;
  Mat B;
  std::size_t n_complete = 0;
};

// Complete-case least squares by Levenberg-Marquardt damped Gauss-Newton,
// at most 200 accepted steps. Converged means ||grad S|| <= 1e-8 (1 + S).
FitResult fit_ls(const ObservedDataset& data, const RegressionModel& model, const Vec& init);

// Complete-case least absolute deviations: IRLS with weights
// 1 / max(|r_i|, 1e-6), then a Nelder-Mead polish of 500 evaluations and an
// exact refit through the d smallest residuals. Converged means no local
// polish from 10 perturbed restarts improves the objective by more than 1e-8.
FitResult fit_lad(const ObservedDataset& data, const RegressionModel& model, const Vec& init);

// Exact LAD for the linear model via the L1 linear program. Used to cross
// check fit_lad.
FitResult fit_lad_linear_exact(const ObservedDataset& data);

double ls_objective(const ObservedDataset& data, const RegressionModel& model, const Vec& beta);
double lad_objective(const ObservedDataset& data, const RegressionModel& model, const Vec& beta);

AsymptoticMatrices estimate_moment_matrices(const ObservedDataset& data,
                                            const RegressionModel& model, const Vec& beta);

// n (b - b0)^T A B^-1 A (b - b0). Throws NumericalError if B is singular.
double normal_stat_ls(const Vec& beta_hat, const Vec& beta0, const Mat& A, const Mat& B,
                      std::size_t n);

// 4 n e0^2 (b - b0)^T A (b - b0). Throws NumericalError unless A is positive
// definite and e0 > 0.
double normal_stat_lad(const Vec& beta_hat, const Vec& beta0, const Mat& A, double e0,
                       std::size_t n);

}  // namespace elmiss
