#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "elmiss/model.hpp"

namespace elmiss {

enum class ErrorFamily { normal, laplace, cauchy, none };

std::string to_string(ErrorFamily family);
ErrorFamily parse_error_family(const std::string& name);

// Homoskedastic error law. `scale` is the standard deviation for the normal
// family and the scale parameter for Laplace and Cauchy. Family `none` is a
// point mass at zero (noiseless data for exact-recovery checks).
class ErrorDist {
 public:
  ErrorDist(ErrorFamily family, double scale);

  static ErrorDist normal(double sd) { return {ErrorFamily::normal, sd}; }
  static ErrorDist laplace(double scale) { return {ErrorFamily::laplace, scale}; }
  static ErrorDist cauchy(double scale) { return {ErrorFamily::cauchy, scale}; }
  static ErrorDist noiseless() { return {ErrorFamily::none, 0.0}; }

  ErrorFamily family() const { return family_; }
  double scale() const { return scale_; }
  // e(0); +inf for the noiseless family.
  double density_at_zero() const;
  bool has_finite_variance() const { return family_ != ErrorFamily::cauchy; }
  // Throws NumericalError for Cauchy.
  double variance() const;

 private:
  ErrorFamily family_;
  double scale_;
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

// Engine for one (master_seed, stream_id) pair. Streams with distinct ids are
// statistically independent; the same pair always yields the same sequence.
std::mt19937_64 make_engine(SeedSpec seed);

// Selection probability pi(x) = P(delta = 1 | X = x). The callable only ever
// sees the covariate, so missingness is MAR by construction.
struct MissingnessRule {
  enum class Kind { case_a, case_b, custom };
  Kind kind = Kind::custom;
  std::function<double(const Vec& x)> pi;

  static MissingnessRule case_a();
  static MissingnessRule case_b();
  static MissingnessRule constant(double probability);
  static MissingnessRule custom(std::function<double(const Vec& x)> pi);
};

std::string to_string(MissingnessRule::Kind kind);

// 0.8 + 0.2|x - 1| for |x - 1| <= 1, 0.95 elsewhere.
double pi_case_a(double x);

struct Observation {
  Vec x;
  std::optional<double> y;
  bool observed() const { return y.has_value(); }
  int delta() const { return y.has_value() ? 1 : 0; }
};

// MAR sample: every covariate observed, responses possibly missing.
struct ObservedDataset {
  std::vector<Observation> rows;

  std::size_t n() const { return rows.size(); }
  std::size_t complete_count() const;
  int p() const { return rows.empty() ? 0 : static_cast<int>(rows.front().x.size()); }
  // Throws DataError unless n >= 1, all rows share p, and every value is finite.
  void validate() const;
};

struct CovariateSpec {
  double mean = 1.0;
  double sd = 1.0;
};

std::vector<double> sample_error(const ErrorDist& dist, SeedSpec seed, std::size_t count);

// Draws sample values from `engine` (used by generate_dataset so the whole
// dataset comes from one stream).
double draw_error(const ErrorDist& dist, std::mt19937_64& engine);

ObservedDataset generate_dataset(const RegressionModel& model, const Vec& beta0,
                                 const CovariateSpec& xdist, const ErrorDist& edist,
                                 const MissingnessRule& rule, std::size_t n, SeedSpec seed);

}  // namespace elmiss
