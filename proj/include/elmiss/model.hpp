#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace elmiss {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A scalar regression function f(x, beta) with its parameter gradient.
//
// `singular` flags (x, beta) pairs where f is undefined. It receives the
// covariate because some models (Chwirut) are only singular for particular
// covariate values. value() and gradient() throw SingularParameterError at
// such points; the raw callables are never invoked there.
class RegressionModel {
 public:
  using ValueFn = std::function<double(const Vec& x, const Vec& beta)>;
  using GradientFn = std::function<Vec(const Vec& x, const Vec& beta)>;
  using SingularFn = std::function<bool(const Vec& x, const Vec& beta)>;

  RegressionModel(std::string name, int d, int p, ValueFn f, GradientFn grad,
                  SingularFn singular);

  const std::string& name() const { return name_; }
  int d() const { return d_; }
  int p() const { return p_; }

  double value(const Vec& x, const Vec& beta) const;
  Vec gradient(const Vec& x, const Vec& beta) const;

  bool is_singular(const Vec& x, const Vec& beta) const;
  // Throws SingularParameterError if (x, beta) is singular.
  void require_regular(const Vec& x, const Vec& beta) const;

 private:
  void check_shapes(const Vec& x, const Vec& beta) const;

  std::string name_;
  int d_;
  int p_;
  ValueFn f_;
  GradientFn grad_;
  SingularFn singular_;
};

// f(x; b) = b1 / (b1 - b2) * (exp(-b2 x) - exp(-b1 x)); singular when
// |b1 - b2| < 1e-10.
RegressionModel make_two_compartment();

// f(x; b) = exp(-b1 x) / (b2 + b3 x); singular when b2 + b3 x <= 1e-12.
RegressionModel make_chwirut_rational();

// f(x; b) = x^T b.
RegressionModel make_linear(int p);

// Wraps a user-supplied function with a central-difference gradient using
// step 1e-6 * (1 + |b_k|).
RegressionModel make_finite_difference_model(std::string name, int d, int p,
                                             RegressionModel::ValueFn f,
                                             RegressionModel::SingularFn singular = {});

// Looks up "two_compartment", "chwirut" or "linear" (p = 1). Throws DataError
// for unknown names.
RegressionModel make_model(const std::string& name);

Vec central_difference_gradient(const RegressionModel& model, const Vec& x,
                                const Vec& beta);

// True iff the analytic gradient matches central differences to `tol`
// (max over components of |analytic - numeric| / max(1, |numeric|)).
bool check_gradient(const RegressionModel& model, const Vec& x, const Vec& beta,
                    double tol);

}  // namespace elmiss
