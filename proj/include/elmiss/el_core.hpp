#pragma once

#include <string>

#include "elmiss/estimators.hpp"
#include "elmiss/model.hpp"
#include "elmiss/sampling.hpp"

namespace elmiss {

enum class ScoreKind { ls, lad, imputed, mean };

std::string to_string(ScoreKind kind);

// n x d matrix whose rows are the estimating functions g_i(beta).
struct ScoreMatrix {
  Mat g;
  ScoreKind kind = ScoreKind::ls;

  Eigen::Index n() const { return g.rows(); }
  Eigen::Index d() const { return g.cols(); }
};

enum class ElStatus { converged, hull_violation, singular, iteration_limit };

std::string to_string(ElStatus status);

// Solution of the inner EL problem. For status == converged the weights are
// p_i = 1 / (n (1 + lambda^T g_i)); hull violations carry statistic = +inf.
struct ElEvaluation {
  double statistic = 0.0;
  Vec lambda;
  Vec weights;
  ElStatus status = ElStatus::converged;
  int iterations = 0;

  bool ok() const { return status == ElStatus::converged; }
};

// Rows delta_i r_i fdot (LS) or delta_i sign(r_i) fdot (LAD) with sign(0) = 0;
// incomplete rows are zero.
ScoreMatrix build_scores(const ObservedDataset& data, const RegressionModel& model,
                         const Vec& beta, ScoreKind kind);

// n^-1 sum g_i g_i^T.
Mat moment_matrix(const ScoreMatrix& scores);

// True iff the origin lies in the convex hull of the nonzero rows (checked by
// a phase-one linear program on the normalized rows).
bool origin_in_hull(const Mat& g);

// Damped Newton on the concave dual sum log(1 + lambda^T g_i), keeping
// 1 + lambda^T g_i >= 1/n. At most 100 Newton steps.
ElEvaluation solve_lambda(const ScoreMatrix& scores);

// l_n(beta) = 2 sum log(1 + lambda^T g_i(beta)).
ElEvaluation el_statistic(const ObservedDataset& data, const RegressionModel& model,
                          const Vec& beta, ScoreKind kind);

// n gbar^T B_n^-1 gbar. Zero when sum g_i vanishes exactly; throws
// NumericalError when B_n is singular otherwise.
double el_statistic_approx(const ScoreMatrix& scores);

// EL statistic for a mean: solve_lambda on the column (values_i - theta0).
ElEvaluation el_mean_statistic(const Vec& values, double theta0);

// Minimizer of beta -> l_n(beta) by Nelder-Mead (1000 evaluations, one
// restart from the incumbent when budget remains). If l_n(init) is infinite
// the search starts from the LS fit computed from init. For LS and LAD scores
// the matching M-estimator, run from the incumbent and from init, replaces
// the incumbent when it attains a smaller l_n.
FitResult mele_fit(const ObservedDataset& data, const RegressionModel& model, const Vec& init,
                   ScoreKind kind = ScoreKind::ls);

}  // namespace elmiss
