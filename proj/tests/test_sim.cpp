#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "elmiss/chwirut1.hpp"
#include "elmiss/error.hpp"
#include "elmiss/io.hpp"
#include "elmiss/sim.hpp"

using namespace elmiss;

namespace {

SimConfig base(std::size_t M) {
  ::unsetenv("EL_MISSREG_THREADS");
  SimConfig cfg;
  cfg.M = M;
  return cfg;
}

bool same_outcomes(const ReplicateOutcome& a, const ReplicateOutcome& b) {
  for (std::size_t k = 0; k < a.methods.size(); ++k) {
    if (a.methods[k].statistic != b.methods[k].statistic) return false;
  }
  return a.beta_ls == b.beta_ls && a.beta_lad == b.beta_lad;
}

}  // namespace

TEST_SUITE("sim") {
  TEST_CASE("replicates are deterministic") {
    auto cfg = base(1);
    cfg.methods.assign(kAllMethods.begin(), kAllMethods.end());
    CHECK(same_outcomes(run_replicate(cfg, 3), run_replicate(cfg, 3)));
    CHECK_FALSE(same_outcomes(run_replicate(cfg, 3), run_replicate(cfg, 4)));
  }

  TEST_CASE("one replicate: every statistic finite and nonnegative") {
    const auto cfg = base(1);
    const auto rep = run_replicate(cfg, 0);
    for (auto m : cfg.methods) {
      const auto& s = rep.methods[static_cast<std::size_t>(m)].statistic;
      REQUIRE(s.has_value());
      CHECK(std::isfinite(*s));
      CHECK(*s >= 0.0);
    }
  }

  TEST_CASE("noiseless complete data covers with every method") {
    auto cfg = base(5);
    cfg.error = ErrorDist::noiseless();
    cfg.pi = MissingnessRule::constant(1.0);
    cfg.methods = {CoverageMethod::cp_ls, CoverageMethod::cp_lad, CoverageMethod::cp_hat_ls};
    const auto report = coverage_study(cfg);
    for (const auto& c : report.coverage) CHECK(c.coverage == 1.0);
    const auto summaries = estimator_summary_study(cfg);
    for (const auto& e : summaries) {
      CHECK(e.valid == 5);
      for (std::size_t k = 0; k < 2; ++k) {
        CHECK(e.components[k].mean == doctest::Approx(cfg.beta0[static_cast<Eigen::Index>(k)]).epsilon(1e-9));
        CHECK(e.components[k].sd <= 1e-8);
      }
    }
  }

  TEST_CASE("configuration checks") {
    auto cfg = base(0);
    CHECK_THROWS_AS(coverage_study(cfg), DataError);
    cfg.M = 10;
    cfg.level = 1.5;
    CHECK_THROWS_AS(coverage_study(cfg), DataError);
    cfg.level = 0.95;
    cfg.error = ErrorDist::cauchy(1.0);
    CHECK_FALSE(cfg.applicable(CoverageMethod::ncp_ls));
    CHECK(cfg.applicable(CoverageMethod::ncp_lad));
  }

  TEST_CASE("coverage with normal errors") {
    auto cfg = base(200);
    cfg.methods.assign(kAllMethods.begin(), kAllMethods.end());
    const auto report = coverage_study(cfg);
    const auto& cp = report.at(CoverageMethod::cp_ls);
    CHECK(cp.coverage > 0.93);
    CHECK(cp.coverage <= 1.0);
    CHECK(std::abs(report.at(CoverageMethod::cp_hat_ls).coverage - cp.coverage) <= 0.05);
    for (const auto& c : report.coverage) {
      CHECK(c.covered + c.not_covered + c.excluded == cfg.M);
    }
    CHECK(report.theta0 == doctest::Approx(2.0 * (std::exp(-0.5) - std::exp(-0.375))).epsilon(1e-9));

    SUBCASE("wider level never covers less") {
      const auto wide = coverage_at_level(cfg, report.replicates, 0.99);
      for (std::size_t k = 0; k < wide.size(); ++k) {
        CHECK(wide[k].covered >= report.coverage[k].covered);
      }
    }
  }

  TEST_CASE("Cauchy errors") {
    auto cfg = base(200);
    cfg.error = ErrorDist::cauchy(2.0);
    const auto report = coverage_study(cfg);
    CHECK_FALSE(report.at(CoverageMethod::ncp_ls).applicable);
    CHECK(report.at(CoverageMethod::cp_lad).coverage >=
          report.at(CoverageMethod::cp_ls).coverage - 0.02);
  }

  TEST_CASE("LS estimates under case a centre on the truth") {
    auto cfg = base(200);
    cfg.pi = MissingnessRule::case_a();
    const auto s = estimator_summary_study(cfg);
    const auto& ls = s.front().method == "LS" ? s.front() : s.back();
    CHECK(ls.components[0].mean > 0.95);
    CHECK(ls.components[0].mean < 1.05);
  }

  TEST_CASE("thread count does not change results") {
    auto cfg = base(24);
    cfg.methods.assign(kAllMethods.begin(), kAllMethods.end());
    cfg.threads = 1;
    const auto one = coverage_study(cfg);
    cfg.threads = 8;
    const auto eight = coverage_study(cfg);
    CHECK(eight.threads_used == 8);
    REQUIRE(one.replicates.size() == eight.replicates.size());
    for (std::size_t i = 0; i < one.replicates.size(); ++i) {
      CHECK(same_outcomes(one.replicates[i], eight.replicates[i]));
    }
    CHECK(to_json(cfg, one)["coverage"] == to_json(cfg, eight)["coverage"]);
    CHECK(to_json(cfg, one)["estimators"] == to_json(cfg, eight)["estimators"]);
  }

  TEST_CASE("environment overrides the thread count") {
    ::setenv("EL_MISSREG_THREADS", "3", 1);
    CHECK(resolve_threads(8) == 3);
    ::unsetenv("EL_MISSREG_THREADS");
    CHECK(resolve_threads(5) == 5);
    CHECK(resolve_threads(0) >= 1);
  }

  TEST_CASE("config JSON round trip") {
    auto cfg = base(17);
    cfg.n = 120;
    cfg.error = ErrorDist::laplace(2.0);
    cfg.pi = MissingnessRule::case_a();
    cfg.seed = 99;
    const auto back = sim_config_from_json(to_json(cfg));
    CHECK(back.n == 120);
    CHECK(back.M == 17);
    CHECK(back.error.family() == ErrorFamily::laplace);
    CHECK(back.error.scale() == 2.0);
    CHECK(back.pi.kind == MissingnessRule::Kind::case_a);
    CHECK(back.seed == 99);
    CHECK(back.methods == cfg.methods);
    CHECK_THROWS_AS(sim_config_from_json(nlohmann::json::parse(R"({"n": "many"})")), DataError);
    CHECK_THROWS_AS(sim_config_from_json(nlohmann::json::parse(R"({"methods": ["CP_XX"]})")),
                    DataError);
    CHECK_THROWS_AS(sim_config_from_json(nlohmann::json::parse(R"({"sample_size": 10})")),
                    DataError);
    CHECK_THROWS_AS(
        sim_config_from_json(nlohmann::json::parse(R"({"error": {"family": "normal", "scale": 2}})")),
        DataError);
  }

  TEST_CASE("masking study on Chwirut1") {
    const auto data = load_chwirut1();
    const auto model = make_chwirut_rational();
    const Vec init = Eigen::Map<const Vec>(kChwirut1Start.data(), 3);
    const auto report = masking_study(data, model, init, {0.0, 0.2}, 100, 7, 0.95, {}, 1);
    REQUIRE(report.rates.size() == 2);
    // Nothing masked: every row is observed and pi_hat = 1, so y_tilde = Y.
    CHECK(report.rates[0].recon_sd <= 1e-12);
    CHECK(report.rates[0].accept_ls == 1.0);
    const auto& r = report.rates[1];
    CHECK(r.accept_ls >= 0.98);
    CHECK(r.recon_sd < report.forecast_sd_ls);
    CHECK(r.mean_missing == doctest::Approx(0.2 * 214).epsilon(0.1));
    CHECK_THROWS_AS(masking_study(data, model, init, {1.0}, 10, 7), DataError);
    const auto j = to_json(report);
    CHECK(j["rates"].size() == 2);
  }
}
