#include "elmiss/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <initializer_list>
#include <numbers>
#include <string_view>
#include <thread>

#include <fmt/format.h>

#include "elmiss/chi2.hpp"
#include "elmiss/error.hpp"
#include "elmiss/io.hpp"

namespace elmiss {

namespace {

std::size_t slot(CoverageMethod m) { return static_cast<std::size_t>(m); }

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Runs body(i) for i in [0, count) on `threads` workers. Exceptions from any
// worker are rethrown on the caller's thread.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < count && !failed; i = next++) {
      try {
        body(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

ComponentSummary summarize(std::vector<double> values) {
  ComponentSummary s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

double mean_of(const Vec& v) { return v.size() ? v.mean() : 0.0; }

double sd_of(const Vec& v) {
  if (v.size() < 2) return 0.0;
  const double m = v.mean();
  return std::sqrt((v.array() - m).square().sum() / static_cast<double>(v.size() - 1));
}

MissingnessRule rule_from_kind(const std::string& name) {
  if (name == "a") return MissingnessRule::case_a();
  if (name == "b") return MissingnessRule::case_b();
  if (name == "none") return MissingnessRule::constant(1.0);
  throw DataError(fmt::format("unknown pi case '{}' (expected a, b or none)", name));
}

}  // namespace

std::string to_string(CoverageMethod method) {
  switch (method) {
    case CoverageMethod::cp_ls: return "CP_LS";
    case CoverageMethod::cp_lad: return "CP_LAD";
    case CoverageMethod::cp_hat_ls: return "CP_HAT_LS";
    case CoverageMethod::ncp_ls: return "NCP_LS";
    case CoverageMethod::ncp_lad: return "NCP_LAD";
    case CoverageMethod::cp_mean: return "CP_MEAN";
  }
  return "?";
}

CoverageMethod parse_coverage_method(const std::string& name) {
  for (auto m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  throw DataError(fmt::format("unknown coverage method '{}'", name));
}

bool SimConfig::wants(CoverageMethod m) const {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

bool SimConfig::applicable(CoverageMethod m) const {
  return m != CoverageMethod::ncp_ls || error.has_finite_variance();
}

void SimConfig::validate() const {
  const auto mdl = make_model(model);
  if (beta0.size() != mdl.d()) {
    throw DataError(fmt::format("beta0 has {} components, model '{}' needs {}", beta0.size(),
                                model, mdl.d()));
  }
  if (M < 1) throw DataError("M must be at least 1");
  if (n < 2) throw DataError("n must be at least 2");
  if (!(level > 0.0 && level < 1.0)) throw DataError("level must be in (0, 1)");
  if (!pi.pi) throw DataError("missing selection probability");
}

bool ReplicateOutcome::covered(CoverageMethod m, double cutoff) const {
  const auto& s = methods[slot(m)].statistic;
  return s && *s <= cutoff;
}

ReplicateOutcome run_replicate(const SimConfig& cfg, std::size_t index) {
  const auto model = make_model(cfg.model);
  const auto data = generate_dataset(model, cfg.beta0, cfg.x, cfg.error, cfg.pi, cfg.n,
                                     {cfg.seed, static_cast<std::uint64_t>(index)});
  ReplicateOutcome out;
  out.index = index;
  auto record = [&](CoverageMethod m, auto&& compute) {
    if (!cfg.wants(m) || !cfg.applicable(m)) return;
    try {
      const double s = compute();
      if (!std::isnan(s)) out.methods[slot(m)].statistic = s;
    } catch (const Error&) {
      // failure: statistic stays empty
    }
  };

  std::optional<FitResult> ls;
  std::optional<FitResult> lad;
  try {
    auto fit = fit_ls(data, model, cfg.beta0);
    if (fit.converged) ls = std::move(fit);
  } catch (const Error&) {
  }
  try {
    auto fit = fit_lad(data, model, cfg.beta0);
    if (fit.converged) lad = std::move(fit);
  } catch (const Error&) {
  }
  if (ls) out.beta_ls = ls->beta;
  if (lad) out.beta_lad = lad->beta;

  record(CoverageMethod::cp_ls, [&] {
    return el_statistic_approx(build_scores(data, model, cfg.beta0, ScoreKind::ls));
  });
  record(CoverageMethod::cp_lad, [&] {
    return el_statistic_approx(build_scores(data, model, cfg.beta0, ScoreKind::lad));
  });

  std::optional<ImputedDataset> imputed;
  if (ls && (cfg.wants(CoverageMethod::cp_hat_ls) || cfg.wants(CoverageMethod::cp_mean))) {
    try {
      imputed = impute_responses(data, model, *ls, estimate_pi(data, cfg.kernel));
    } catch (const Error&) {
    }
  }
  record(CoverageMethod::cp_hat_ls, [&] {
    if (!imputed) throw NumericalError("no imputation");
    return el_statistic_approx(build_scores_imputed(*imputed, model, cfg.beta0));
  });
  record(CoverageMethod::cp_mean, [&] {
    if (!imputed) throw NumericalError("no imputation");
    const auto ev = el_mean_statistic(imputed->y_tilde, response_mean(cfg));
    if (ev.status == ElStatus::hull_violation) return ev.statistic;
    if (!ev.ok()) throw NumericalError("mean EL did not converge");
    return ev.statistic;
  });
  record(CoverageMethod::ncp_ls, [&] {
    if (!ls) throw NumericalError("LS fit failed");
    const auto mats = estimate_moment_matrices(data, model, ls->beta);
    return normal_stat_ls(ls->beta, cfg.beta0, mats.A, mats.B, data.n());
  });
  record(CoverageMethod::ncp_lad, [&] {
    if (!lad) throw NumericalError("LAD fit failed");
    const auto mats = estimate_moment_matrices(data, model, lad->beta);
    return normal_stat_lad(lad->beta, cfg.beta0, mats.A, cfg.error.density_at_zero(), data.n());
  });
  return out;
}

double response_mean(const SimConfig& cfg) {
  const auto model = make_model(cfg.model);
  if (model.p() != 1) throw UnsupportedMethodError("response_mean supports p = 1 only");
  constexpr int kIntervals = 20000;  // even
  const double a = cfg.x.mean - 12.0 * cfg.x.sd;
  const double b = cfg.x.mean + 12.0 * cfg.x.sd;
  const double h = (b - a) / kIntervals;
  Vec x(1);
  auto integrand = [&](double t) {
    x[0] = t;
    const double z = (t - cfg.x.mean) / cfg.x.sd;
    return model.value(x, cfg.beta0) * std::exp(-0.5 * z * z) /
           (cfg.x.sd * std::sqrt(2.0 * std::numbers::pi));
  };
  double sum = integrand(a) + integrand(b);
  for (int i = 1; i < kIntervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * integrand(a + i * h);
  return sum * h / 3.0;
}

std::vector<MethodCoverage> coverage_at_level(const SimConfig& cfg,
                                              const std::vector<ReplicateOutcome>& reps,
                                              double level) {
  const double cutoff_d = chi2_quantile(level, static_cast<double>(cfg.beta0.size()));
  const double cutoff_1 = chi2_quantile(level, 1.0);
  std::vector<MethodCoverage> out;
  for (auto m : cfg.methods) {
    MethodCoverage mc;
    mc.method = m;
    mc.applicable = cfg.applicable(m);
    if (mc.applicable) {
      const double cutoff = m == CoverageMethod::cp_mean ? cutoff_1 : cutoff_d;
      for (const auto& r : reps) {
        const auto& s = r.methods[slot(m)].statistic;
        if (!s) {
          ++mc.excluded;
        } else if (*s <= cutoff) {
          ++mc.covered;
        } else {
          ++mc.not_covered;
        }
      }
      const auto valid = mc.covered + mc.not_covered;
      mc.coverage = reps.empty() ? 0.0 : static_cast<double>(mc.covered) / reps.size();
      mc.coverage_valid = valid ? static_cast<double>(mc.covered) / valid : 0.0;
    }
    out.push_back(mc);
  }
  return out;
}

std::vector<EstimatorSummary> summarize_estimates(const std::vector<ReplicateOutcome>& reps,
                                                  int d) {
  std::vector<EstimatorSummary> out;
  for (const std::string method : {"LS", "LAD"}) {
    EstimatorSummary es;
    es.method = method;
    for (int k = 0; k < d; ++k) {
      std::vector<double> values;
      for (const auto& r : reps) {
        const auto& b = method == "LS" ? r.beta_ls : r.beta_lad;
        if (b) values.push_back((*b)[k]);
      }
      es.valid = values.size();
      es.components.push_back(summarize(std::move(values)));
    }
    out.push_back(std::move(es));
  }
  return out;
}

const MethodCoverage& CoverageReport::at(CoverageMethod m) const {
  for (const auto& c : coverage) {
    if (c.method == m) return c;
  }
  throw DataError("method " + to_string(m) + " not in report");
}

const EstimatorSummary& CoverageReport::estimator(const std::string& method) const {
  for (const auto& e : estimators) {
    if (e.method == method) return e;
  }
  throw DataError("estimator " + method + " not in report");
}

unsigned resolve_threads(unsigned requested) {
  if (const char* env = std::getenv("EL_MISSREG_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 0) requested = static_cast<unsigned>(v);
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

CoverageReport coverage_study(const SimConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  CoverageReport report;
  report.threads_used = resolve_threads(cfg.threads);
  report.replicates.resize(cfg.M);
  parallel_for(cfg.M, report.threads_used,
               [&](std::size_t i) { report.replicates[i] = run_replicate(cfg, i); });
  report.coverage = coverage_at_level(cfg, report.replicates, cfg.level);
  report.estimators = summarize_estimates(report.replicates, static_cast<int>(cfg.beta0.size()));
  if (cfg.wants(CoverageMethod::cp_mean)) report.theta0 = response_mean(cfg);
  report.elapsed_seconds = elapsed_since(start);
  return report;
}

std::vector<EstimatorSummary> estimator_summary_study(const SimConfig& cfg) {
  SimConfig fits_only = cfg;
  fits_only.methods.clear();
  return coverage_study(fits_only).estimators;
}

MaskingReport masking_study(const ObservedDataset& data, const RegressionModel& model,
                            const Vec& init, const std::vector<double>& mask_rates,
                            std::size_t reps, std::uint64_t seed, double level,
                            const KernelConfig& kernel, unsigned threads) {
  if (reps < 1) throw DataError("masking study needs at least one replicate");
  for (double r : mask_rates) {
    if (!(r >= 0.0 && r < 1.0)) throw DataError(fmt::format("mask rate {} not in [0, 1)", r));
  }
  if (data.complete_count() != data.n()) throw DataError("masking study needs complete data");
  const auto start = std::chrono::steady_clock::now();

  MaskingReport report;
  report.level = level;
  report.seed = seed;
  const auto full = fit_ls(data, model, init);
  if (!full.converged) throw NumericalError("full-data LS fit did not converge");
  report.beta_full = full.beta;
  const auto full_lad = fit_lad(data, model, full.beta);
  report.beta_full_lad = full_lad.beta;

  Vec y(static_cast<Eigen::Index>(data.n()));
  Vec forecast_ls(y.size());
  Vec forecast_lad(y.size());
  for (std::size_t i = 0; i < data.n(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    y[idx] = *data.rows[i].y;
    forecast_ls[idx] = y[idx] - model.value(data.rows[i].x, full.beta);
    forecast_lad[idx] = y[idx] - model.value(data.rows[i].x, full_lad.beta);
  }
  report.forecast_mean_ls = mean_of(forecast_ls);
  report.forecast_sd_ls = sd_of(forecast_ls);
  report.forecast_mean_lad = mean_of(forecast_lad);
  report.forecast_sd_lad = sd_of(forecast_lad);

  const double cutoff = chi2_quantile(level, model.d());
  const Vec& beta0 = full.beta;
  const unsigned workers = resolve_threads(threads);

  struct RepOutcome {
    std::optional<bool> ls, lad, hat;
    std::optional<std::pair<double, double>> recon;
    std::size_t missing = 0;
    std::size_t clamped = 0;
  };

  for (std::size_t r = 0; r < mask_rates.size(); ++r) {
    const double rate = mask_rates[r];
    std::vector<RepOutcome> outcomes(reps);
    parallel_for(reps, workers, [&](std::size_t k) {
      RepOutcome& o = outcomes[k];
      const auto masked = mask_missing(data, rate, {seed, (static_cast<std::uint64_t>(r) << 32) | k});
      o.missing = masked.n() - masked.complete_count();
      auto accept = [&](auto&& stat) -> std::optional<bool> {
        try {
          return stat() <= cutoff;
        } catch (const Error&) {
          return std::nullopt;
        }
      };
      o.ls = accept([&] {
        return el_statistic_approx(build_scores(masked, model, beta0, ScoreKind::ls));
      });
      o.lad = accept([&] {
        return el_statistic_approx(build_scores(masked, model, beta0, ScoreKind::lad));
      });
      try {
        const auto fit = fit_ls(masked, model, beta0);
        if (!fit.converged) return;
        const auto pi = estimate_pi(masked, kernel);
        o.clamped = pi.clamped;
        const auto imp = impute_responses(masked, model, fit, pi);
        o.hat = accept([&] { return el_statistic_approx(build_scores_imputed(imp, model, beta0)); });
        const Vec diff = y - imp.y_tilde;
        o.recon = std::make_pair(mean_of(diff), sd_of(diff));
      } catch (const Error&) {
      }
    });

    MaskingRateResult res;
    res.rate = rate;
    res.reps = reps;
    std::size_t ok_ls = 0, ok_lad = 0, ok_hat = 0, recon_count = 0;
    double missing = 0.0, clamped = 0.0;
    for (const auto& o : outcomes) {
      o.ls ? ok_ls += *o.ls : ++res.failures_ls;
      o.lad ? ok_lad += *o.lad : ++res.failures_lad;
      o.hat ? ok_hat += *o.hat : ++res.failures_hat_ls;
      if (o.recon) {
        res.recon_mean += o.recon->first;
        res.recon_sd += o.recon->second;
        ++recon_count;
      }
      missing += static_cast<double>(o.missing);
      clamped += static_cast<double>(o.clamped);
    }
    const double total = static_cast<double>(reps);
    res.accept_ls = ok_ls / total;
    res.accept_lad = ok_lad / total;
    res.accept_hat_ls = ok_hat / total;
    if (recon_count) {
      res.recon_mean /= static_cast<double>(recon_count);
      res.recon_sd /= static_cast<double>(recon_count);
    }
    res.mean_missing = missing / total;
    res.pi_clamp_rate = clamped / (total * static_cast<double>(data.n()));
    report.rates.push_back(res);
  }
  report.elapsed_seconds = elapsed_since(start);
  return report;
}

nlohmann::json to_json(const SimConfig& cfg) {
  nlohmann::json methods = nlohmann::json::array();
  for (auto m : cfg.methods) methods.push_back(to_string(m));
  nlohmann::json bandwidth = {{"rule", to_string(cfg.kernel.rule)}};
  if (cfg.kernel.rule == BandwidthRule::fixed) bandwidth["h"] = cfg.kernel.bandwidth;
  return {
      {"model", cfg.model},
      {"beta0", std::vector<double>(cfg.beta0.data(), cfg.beta0.data() + cfg.beta0.size())},
      {"n", cfg.n},
      {"M", cfg.M},
      {"error", {{"family", to_string(cfg.error.family())}, {"sigma", cfg.error.scale()}}},
      {"pi", {{"case", to_string(cfg.pi.kind)}}},
      {"x", {{"mean", cfg.x.mean}, {"sd", cfg.x.sd}}},
      {"level", cfg.level},
      {"seed", cfg.seed},
      {"methods", methods},
      {"bandwidth", bandwidth},
      {"pi_floor", cfg.kernel.pi_floor},
      {"threads", cfg.threads},
  };
}

namespace {

void require_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                  const std::string& where) {
  if (!j.is_object()) throw DataError(fmt::format("{} must be a JSON object", where));
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw DataError(fmt::format("unknown key '{}' in {}", item.key(), where));
    }
  }
}

}  // namespace

SimConfig sim_config_from_json(const nlohmann::json& j) {
  SimConfig cfg;
  try {
    require_keys(j,
                 {"model", "beta0", "n", "M", "error", "pi", "x", "level", "seed", "methods",
                  "bandwidth", "pi_floor", "threads"},
                 "config");
    cfg.model = j.value("model", cfg.model);
    if (j.contains("beta0")) {
      const auto b = j.at("beta0").get<std::vector<double>>();
      cfg.beta0 = Eigen::Map<const Vec>(b.data(), static_cast<Eigen::Index>(b.size()));
    } else if (cfg.model != "two_compartment") {
      throw DataError("beta0 is required for model " + cfg.model);
    }
    cfg.n = j.value("n", cfg.n);
    cfg.M = j.value("M", cfg.M);
    if (j.contains("error")) {
      const auto& e = j.at("error");
      require_keys(e, {"family", "sigma"}, "error");
      cfg.error = ErrorDist(parse_error_family(e.value("family", std::string("normal"))),
                            e.value("sigma", 1.0));
    }
    if (j.contains("pi")) {
      const auto& p = j.at("pi");
      if (!p.is_string()) require_keys(p, {"case"}, "pi");
      cfg.pi = p.is_string() ? rule_from_kind(p.get<std::string>())
                             : rule_from_kind(p.value("case", std::string("b")));
    }
    if (j.contains("x")) {
      require_keys(j.at("x"), {"mean", "sd"}, "x");
      cfg.x.mean = j.at("x").value("mean", cfg.x.mean);
      cfg.x.sd = j.at("x").value("sd", cfg.x.sd);
    }
    cfg.level = j.value("level", cfg.level);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_coverage_method(m));
    }
    if (j.contains("bandwidth")) {
      const auto& b = j.at("bandwidth");
      require_keys(b, {"rule", "h"}, "bandwidth");
      cfg.kernel.rule = parse_bandwidth_rule(b.value("rule", std::string("n_pow")));
      cfg.kernel.bandwidth = b.value("h", cfg.kernel.bandwidth);
    }
    cfg.kernel.pi_floor = j.value("pi_floor", cfg.kernel.pi_floor);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("invalid config: {}", e.what()));
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const SimConfig& cfg, const CoverageReport& report) {
  nlohmann::json coverage = nlohmann::json::object();
  for (const auto& c : report.coverage) {
    if (!c.applicable) {
      coverage[to_string(c.method)] = {{"applicable", false}};
      continue;
    }
    coverage[to_string(c.method)] = {{"applicable", true},           {"coverage", c.coverage},
                                     {"coverage_valid", c.coverage_valid}, {"covered", c.covered},
                                     {"not_covered", c.not_covered}, {"excluded", c.excluded}};
  }
  nlohmann::json estimators = nlohmann::json::object();
  for (const auto& e : report.estimators) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : e.components) {
      comps.push_back({{"mean", c.mean}, {"sd", c.sd}, {"median", c.median}});
    }
    estimators[e.method] = {{"valid", e.valid}, {"components", comps}};
  }
  nlohmann::json out = {{"config", to_json(cfg)},
                        {"seed", cfg.seed},
                        {"coverage", coverage},
                        {"estimators", estimators},
                        {"threads_used", report.threads_used},
                        {"elapsed_seconds", report.elapsed_seconds}};
  if (cfg.wants(CoverageMethod::cp_mean)) out["theta0"] = report.theta0;
  return out;
}

nlohmann::json to_json(const MaskingReport& report) {
  auto vec = [](const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::json rates = nlohmann::json::array();
  for (const auto& r : report.rates) {
    rates.push_back({{"rate", r.rate},
                     {"reps", r.reps},
                     {"accept_ls", r.accept_ls},
                     {"accept_lad", r.accept_lad},
                     {"accept_hat_ls", r.accept_hat_ls},
                     {"failures", {{"ls", r.failures_ls}, {"lad", r.failures_lad},
                                   {"hat_ls", r.failures_hat_ls}}},
                     {"recon_mean", r.recon_mean},
                     {"recon_sd", r.recon_sd},
                     {"mean_missing", r.mean_missing},
                     {"pi_clamp_rate", r.pi_clamp_rate}});
  }
  return {{"beta_full", vec(report.beta_full)},
          {"beta_full_lad", vec(report.beta_full_lad)},
          {"level", report.level},
          {"seed", report.seed},
          {"forecast", {{"mean_ls", report.forecast_mean_ls}, {"sd_ls", report.forecast_sd_ls},
                        {"mean_lad", report.forecast_mean_lad}, {"sd_lad", report.forecast_sd_lad}}},
          {"rates", rates},
          {"elapsed_seconds", report.elapsed_seconds}};
}

}  // namespace elmiss
