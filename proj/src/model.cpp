#include "elmiss/model.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "elmiss/error.hpp"

namespace elmiss {

RegressionModel::RegressionModel(std::string name, int d, int p, ValueFn f,
                                 GradientFn grad, SingularFn singular)
    : name_(std::move(name)),
      d_(d),
      p_(p),
      f_(std::move(f)),
      grad_(std::move(grad)),
      singular_(std::move(singular)) {
  if (d_ < 1 || p_ < 1) {
    throw DataError(fmt::format("model '{}': dimensions must be positive", name_));
  }
  if (!f_ || !grad_) {
    throw DataError(fmt::format("model '{}': missing value or gradient", name_));
  }
}

void RegressionModel::check_shapes(const Vec& x, const Vec& beta) const {
  if (x.size() != p_ || beta.size() != d_) {
    throw DataError(fmt::format("model '{}': expected x[{}] and beta[{}], got x[{}] and beta[{}]",
                                name_, p_, d_, x.size(), beta.size()));
  }
}

bool RegressionModel::is_singular(const Vec& x, const Vec& beta) const {
  check_shapes(x, beta);
  return singular_ && singular_(x, beta);
}

void RegressionModel::require_regular(const Vec& x, const Vec& beta) const {
  if (is_singular(x, beta)) {
    throw SingularParameterError(
        fmt::format("model '{}' is singular at beta = ({})", name_,
                    fmt::join(beta.data(), beta.data() + beta.size(), ", ")));
  }
}

double RegressionModel::value(const Vec& x, const Vec& beta) const {
  require_regular(x, beta);
  return f_(x, beta);
}

Vec RegressionModel::gradient(const Vec& x, const Vec& beta) const {
  require_regular(x, beta);
  return grad_(x, beta);
}

RegressionModel make_two_compartment() {
  auto f = [](const Vec& x, const Vec& b) {
    const double t = x[0];
    return b[0] / (b[0] - b[1]) * (std::exp(-b[1] * t) - std::exp(-b[0] * t));
  };
  auto grad = [](const Vec& x, const Vec& b) {
    const double t = x[0];
    const double e1 = std::exp(-b[0] * t);
    const double e2 = std::exp(-b[1] * t);
    const double diff = b[0] - b[1];
    Vec g(2);
    // d/db1 [b1/(b1-b2)] = -b2/(b1-b2)^2
    g[0] = -b[1] / (diff * diff) * (e2 - e1) + b[0] / diff * (t * e1);
    // d/db2 [b1/(b1-b2)] = b1/(b1-b2)^2
    g[1] = b[0] / (diff * diff) * (e2 - e1) + b[0] / diff * (-t * e2);
    return g;
  };
  auto singular = [](const Vec&, const Vec& b) { return std::abs(b[0] - b[1]) < 1e-10; };
  return RegressionModel("two_compartment", 2, 1, f, grad, singular);
}

RegressionModel make_chwirut_rational() {
  auto f = [](const Vec& x, const Vec& b) {
    const double t = x[0];
    return std::exp(-b[0] * t) / (b[1] + b[2] * t);
  };
  auto grad = [](const Vec& x, const Vec& b) {
    const double t = x[0];
    const double e = std::exp(-b[0] * t);
    const double den = b[1] + b[2] * t;
    Vec g(3);
    g[0] = -t * e / den;
    g[1] = -e / (den * den);
    g[2] = -t * e / (den * den);
    return g;
  };
  auto singular = [](const Vec& x, const Vec& b) { return b[1] + b[2] * x[0] <= 1e-12; };
  return RegressionModel("chwirut", 3, 1, f, grad, singular);
}

RegressionModel make_linear(int p) {
  if (p < 1) throw DataError("linear model needs p >= 1");
  auto f = [](const Vec& x, const Vec& b) { return x.dot(b); };
  auto grad = [](const Vec& x, const Vec&) { return Vec(x); };
  return RegressionModel("linear", p, p, f, grad, {});
}

namespace {

Vec finite_difference(const RegressionModel::ValueFn& f, const Vec& x, const Vec& beta) {
  Vec g(beta.size());
  Vec probe = beta;
  for (Eigen::Index k = 0; k < beta.size(); ++k) {
    const double h = 1e-6 * (1.0 + std::abs(beta[k]));
    probe[k] = beta[k] + h;
    const double up = f(x, probe);
    probe[k] = beta[k] - h;
    const double down = f(x, probe);
    probe[k] = beta[k];
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

}  // namespace

RegressionModel make_finite_difference_model(std::string name, int d, int p,
                                             RegressionModel::ValueFn f,
                                             RegressionModel::SingularFn singular) {
  auto grad = [f](const Vec& x, const Vec& b) { return finite_difference(f, x, b); };
  return RegressionModel(std::move(name), d, p, f, grad, std::move(singular));
}

RegressionModel make_model(const std::string& name) {
  if (name == "two_compartment") return make_two_compartment();
  if (name == "chwirut") return make_chwirut_rational();
  if (name == "linear") return make_linear(1);
  throw DataError(fmt::format("unknown model '{}' (expected two_compartment, chwirut, linear)", name));
}

Vec central_difference_gradient(const RegressionModel& model, const Vec& x, const Vec& beta) {
  model.require_regular(x, beta);
  return finite_difference([&](const Vec& xx, const Vec& bb) { return model.value(xx, bb); }, x,
                           beta);
}

bool check_gradient(const RegressionModel& model, const Vec& x, const Vec& beta, double tol) {
  const Vec analytic = model.gradient(x, beta);
  const Vec numeric = central_difference_gradient(model, x, beta);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < analytic.size(); ++k) {
    const double dev = std::abs(analytic[k] - numeric[k]) / std::max(1.0, std::abs(numeric[k]));
    worst = std::max(worst, dev);
  }
  return worst <= tol;
}

}  // namespace elmiss
