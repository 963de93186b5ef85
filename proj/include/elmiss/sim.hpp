#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "elmiss/impute.hpp"
#include "elmiss/sampling.hpp"

namespace elmiss {

// Confidence-region constructions. cp_mean is the EL region for the response
// mean computed on imputed responses.
enum class CoverageMethod { cp_ls, cp_lad, cp_hat_ls, ncp_ls, ncp_lad, cp_mean };

inline constexpr std::array<CoverageMethod, 6> kAllMethods = {
    CoverageMethod::cp_ls,  CoverageMethod::cp_lad,  CoverageMethod::cp_hat_ls,
    CoverageMethod::ncp_ls, CoverageMethod::ncp_lad, CoverageMethod::cp_mean};

std::string to_string(CoverageMethod method);
CoverageMethod parse_coverage_method(const std::string& name);

struct SimConfig {
  std::string model = "two_compartment";
  Vec beta0 = (Vec(2) << 1.0, 1.5).finished();
  std::size_t n = 300;
  std::size_t M = 200;
  ErrorDist error = ErrorDist::normal(1.0);
  MissingnessRule pi = MissingnessRule::case_b();
  CovariateSpec x;
  double level = 0.95;
  std::uint64_t seed = 20240601;
  std::vector<CoverageMethod> methods = {CoverageMethod::cp_ls, CoverageMethod::cp_lad,
                                         CoverageMethod::cp_hat_ls, CoverageMethod::ncp_ls,
                                         CoverageMethod::ncp_lad};
  KernelConfig kernel;
  // 0 = one worker per hardware thread.
  unsigned threads = 0;

  bool wants(CoverageMethod m) const;
  // NCP_LS is meaningless without a finite error variance.
  bool applicable(CoverageMethod m) const;
  void validate() const;
};

// One method's result on one replicate. `statistic` is empty when the
// replicate failed for that method (non-converged fit, singular matrix).
struct MethodOutcome {
  std::optional<double> statistic;
};

struct ReplicateOutcome {
  std::size_t index = 0;
  std::array<MethodOutcome, kAllMethods.size()> methods{};
  std::optional<Vec> beta_ls;   // set only for converged fits
  std::optional<Vec> beta_lad;
  // statistic <= cutoff; false for failed or missing methods.
  bool covered(CoverageMethod m, double cutoff) const;
};

ReplicateOutcome run_replicate(const SimConfig& cfg, std::size_t replicate_index);

struct MethodCoverage {
  CoverageMethod method;
  bool applicable = true;
  std::size_t covered = 0;
  std::size_t not_covered = 0;
  std::size_t excluded = 0;
  // covered / M: failures count as non-coverage.
  double coverage = 0.0;
  // covered / (covered + not_covered): failures dropped.
  double coverage_valid = 0.0;
};

struct ComponentSummary {
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
};

struct EstimatorSummary {
  std::string method;
  std::size_t valid = 0;
  std::vector<ComponentSummary> components;
};

struct CoverageReport {
  std::vector<MethodCoverage> coverage;
  std::vector<EstimatorSummary> estimators;
  std::vector<ReplicateOutcome> replicates;
  double theta0 = 0.0;
  double elapsed_seconds = 0.0;
  unsigned threads_used = 1;

  const MethodCoverage& at(CoverageMethod m) const;
  const EstimatorSummary& estimator(const std::string& method) const;
};

// E[f(X, beta0)] under the configured covariate law (Simpson quadrature over
// mean +/- 12 sd); the target of cp_mean.
double response_mean(const SimConfig& cfg);

// Runs all replicates (in parallel; results do not depend on the thread
// count) and aggregates them. Throws DataError for M = 0.
CoverageReport coverage_study(const SimConfig& cfg);

// Recomputes coverage from stored replicate statistics at another level.
std::vector<MethodCoverage> coverage_at_level(const SimConfig& cfg,
                                              const std::vector<ReplicateOutcome>& reps,
                                              double level);

// Mean, sd and median of the LS and LAD estimates over converged replicates.
std::vector<EstimatorSummary> estimator_summary_study(const SimConfig& cfg);
std::vector<EstimatorSummary> summarize_estimates(const std::vector<ReplicateOutcome>& reps,
                                                  int d);

struct MaskingRateResult {
  double rate = 0.0;
  std::size_t reps = 0;
  double accept_ls = 0.0;
  double accept_lad = 0.0;
  double accept_hat_ls = 0.0;
  std::size_t failures_ls = 0;
  std::size_t failures_lad = 0;
  std::size_t failures_hat_ls = 0;
  // Replicate averages of mean and sd of Y_i - Y_{n,i} over all rows.
  double recon_mean = 0.0;
  double recon_sd = 0.0;
  double mean_missing = 0.0;
  double pi_clamp_rate = 0.0;
};

struct MaskingReport {
  Vec beta_full;
  Vec beta_full_lad;
  double level = 0.95;
  std::uint64_t seed = 0;
  // Mean and sd of Y_i - f(X_i, beta_full) for the LS and LAD full-data fits.
  double forecast_mean_ls = 0.0;
  double forecast_sd_ls = 0.0;
  double forecast_mean_lad = 0.0;
  double forecast_sd_lad = 0.0;
  std::vector<MaskingRateResult> rates;
  double elapsed_seconds = 0.0;
};

// Masks responses of a fully observed dataset at each rate (independently
// per row), tests H0: beta = beta_full with the approximate EL statistics and
// measures how well imputation reconstructs the hidden responses. beta_full
// is the full-data LS fit started from `init`.
MaskingReport masking_study(const ObservedDataset& data, const RegressionModel& model,
                            const Vec& init, const std::vector<double>& mask_rates,
                            std::size_t reps, std::uint64_t seed, double level = 0.95,
                            const KernelConfig& kernel = {}, unsigned threads = 0);

// Resolves a worker count: EL_MISSREG_THREADS overrides `requested`, 0 means
// hardware concurrency.
unsigned resolve_threads(unsigned requested);

nlohmann::json to_json(const SimConfig& cfg);
SimConfig sim_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimConfig& cfg, const CoverageReport& report);
nlohmann::json to_json(const MaskingReport& report);

}  // namespace elmiss
