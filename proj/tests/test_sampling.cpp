#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "elmiss/error.hpp"
#include "elmiss/model.hpp"
#include "elmiss/sampling.hpp"

using namespace elmiss;

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_SUITE("sampling") {
  TEST_CASE("error law constants") {
    CHECK(ErrorDist::normal(2.0).density_at_zero() ==
          doctest::Approx(1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi))));
    CHECK(ErrorDist::laplace(2.0).density_at_zero() == doctest::Approx(0.25));
    CHECK(ErrorDist::cauchy(2.0).density_at_zero() ==
          doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
    CHECK(ErrorDist::normal(1.0).has_finite_variance());
    CHECK(ErrorDist::laplace(1.0).has_finite_variance());
    CHECK_FALSE(ErrorDist::cauchy(1.0).has_finite_variance());
    CHECK(ErrorDist::normal(2.0).variance() == doctest::Approx(4.0));
    CHECK(ErrorDist::laplace(2.0).variance() == doctest::Approx(8.0));
    CHECK_THROWS_AS(ErrorDist::cauchy(1.0).variance(), NumericalError);
    CHECK_THROWS(ErrorDist(ErrorFamily::normal, -1.0));
  }

  TEST_CASE("empty draw") { CHECK(sample_error(ErrorDist::normal(1.0), {1, 0}, 0).empty()); }

  TEST_CASE("normal draws obey the law of large numbers") {
    const auto draws = sample_error(ErrorDist::normal(1.0), {42, 0}, 100000);
    CHECK(std::abs(mean(draws)) < 0.02);
    CHECK(sd(draws) > 0.99);
    CHECK(sd(draws) < 1.01);
  }

  TEST_CASE("laplace draws have scale parameter sigma") {
    const auto draws = sample_error(ErrorDist::laplace(1.0), {43, 0}, 100000);
    CHECK(std::abs(mean(draws)) < 0.02);
    // sd of a Laplace with scale 1 is sqrt(2).
    CHECK(sd(draws) == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
  }

  TEST_CASE("cauchy median is consistent") {
    const auto draws = sample_error(ErrorDist::cauchy(1.0), {44, 0}, 100000);
    CHECK(std::abs(median(draws)) < 0.02);
    // Quartiles of C(0,1) sit at +/-1.
    std::vector<double> abs_draws(draws.size());
    std::transform(draws.begin(), draws.end(), abs_draws.begin(), [](double x) { return std::abs(x); });
    CHECK(median(abs_draws) == doctest::Approx(1.0).epsilon(0.03));
  }

  TEST_CASE("streams are reproducible and distinct") {
    const auto a = sample_error(ErrorDist::normal(1.0), {7, 3}, 100);
    const auto b = sample_error(ErrorDist::normal(1.0), {7, 3}, 100);
    const auto c = sample_error(ErrorDist::normal(1.0), {7, 4}, 100);
    const auto d = sample_error(ErrorDist::normal(1.0), {8, 3}, 100);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(a != d);
  }

  TEST_CASE("case a selection probability") {
    CHECK(pi_case_a(1.0) == doctest::Approx(0.8));
    CHECK(pi_case_a(3.0) == doctest::Approx(0.95));
    CHECK(pi_case_a(1.5) == doctest::Approx(0.9));
    CHECK(pi_case_a(0.0) == doctest::Approx(1.0));
    CHECK(pi_case_a(-1.0) == doctest::Approx(0.95));
    Vec x(1);
    x[0] = 1.5;
    CHECK(MissingnessRule::case_a().pi(x) == doctest::Approx(0.9));
    CHECK(MissingnessRule::case_b().pi(x) == doctest::Approx(0.8));
  }

  TEST_CASE("case a population mean of pi under N(1,1)") {
    auto engine = make_engine({2024, 0});
    std::normal_distribution<double> xdist(1.0, 1.0);
    double s = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) s += pi_case_a(xdist(engine));
    CHECK(s / n > 0.895);
    CHECK(s / n < 0.915);
  }

  TEST_CASE("generated datasets") {
    const auto m = make_two_compartment();
    const Vec beta0 = (Vec(2) << 1.0, 1.5).finished();
    SUBCASE("pi == 1 leaves every response observed") {
      const auto d = generate_dataset(m, beta0, {}, ErrorDist::normal(1.0),
                                      MissingnessRule::constant(1.0), 500, {1, 0});
      CHECK(d.n() == 500);
      CHECK(d.complete_count() == 500);
    }
    SUBCASE("case b observed fraction") {
      const auto d = generate_dataset(m, beta0, {}, ErrorDist::normal(1.0),
                                      MissingnessRule::case_b(), 100000, {2, 0});
      const double frac = static_cast<double>(d.complete_count()) / 100000.0;
      CHECK(frac > 0.79);
      CHECK(frac < 0.81);
    }
    SUBCASE("determinism") {
      const auto a = generate_dataset(m, beta0, {}, ErrorDist::laplace(1.0),
                                      MissingnessRule::case_a(), 200, {3, 9});
      const auto b = generate_dataset(m, beta0, {}, ErrorDist::laplace(1.0),
                                      MissingnessRule::case_a(), 200, {3, 9});
      REQUIRE(a.n() == b.n());
      bool same = true;
      for (std::size_t i = 0; i < a.n(); ++i) {
        same = same && a.rows[i].x == b.rows[i].x && a.rows[i].y == b.rows[i].y;
      }
      CHECK(same);
    }
    SUBCASE("noiseless responses equal the regression function") {
      const auto d = generate_dataset(m, beta0, {}, ErrorDist::noiseless(),
                                      MissingnessRule::constant(1.0), 50, {4, 0});
      for (const auto& row : d.rows) CHECK(*row.y == m.value(row.x, beta0));
    }
    SUBCASE("singular beta0 is rejected") {
      CHECK_THROWS_AS(generate_dataset(m, (Vec(2) << 1.0, 1.0).finished(), {},
                                      ErrorDist::normal(1.0), MissingnessRule::case_b(), 10,
                                      {5, 0}),
                      SingularParameterError);
    }
  }

  TEST_CASE("missingness sees only the covariate") {
    // The rule is a function of x alone; record what it is handed and check
    // that it matches the dataset's covariates, never the responses.
    std::vector<double> seen;
    const auto rule = MissingnessRule::custom([&](const Vec& x) {
      seen.push_back(x[0]);
      return x[0] > 1.0 ? 0.9 : 0.6;
    });
    const auto d = generate_dataset(make_two_compartment(), (Vec(2) << 1.0, 1.5).finished(), {},
                                    ErrorDist::normal(1.0), rule, 300, {6, 0});
    REQUIRE(seen.size() == d.n());
    for (std::size_t i = 0; i < d.n(); ++i) CHECK(seen[i] == d.rows[i].x[0]);
  }

  TEST_CASE("dataset validation") {
    ObservedDataset d;
    CHECK_THROWS_AS(d.validate(), DataError);
    d.rows.push_back({Vec::Ones(1), 1.0});
    CHECK_NOTHROW(d.validate());
    d.rows.push_back({Vec::Ones(2), 1.0});
    CHECK_THROWS_AS(d.validate(), DataError);
    d.rows.pop_back();
    d.rows.push_back({Vec::Constant(1, std::nan("")), 1.0});
    CHECK_THROWS_AS(d.validate(), DataError);
  }
}
