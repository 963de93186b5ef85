#include "elmiss/sampling.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "elmiss/error.hpp"

namespace elmiss {

std::string to_string(ErrorFamily family) {
  switch (family) {
    case ErrorFamily::normal: return "normal";
    case ErrorFamily::laplace: return "laplace";
    case ErrorFamily::cauchy: return "cauchy";
    case ErrorFamily::none: return "none";
  }
  return "unknown";
}

ErrorFamily parse_error_family(const std::string& name) {
  if (name == "normal") return ErrorFamily::normal;
  if (name == "laplace") return ErrorFamily::laplace;
  if (name == "cauchy") return ErrorFamily::cauchy;
  if (name == "none") return ErrorFamily::none;
  throw DataError(fmt::format("unknown error family '{}'", name));
}

ErrorDist::ErrorDist(ErrorFamily family, double scale) : family_(family), scale_(scale) {
  if (family_ == ErrorFamily::none) {
    scale_ = 0.0;
  } else if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw DataError(fmt::format("error scale must be positive, got {}", scale));
  }
}

double ErrorDist::density_at_zero() const {
  switch (family_) {
    case ErrorFamily::normal: return 1.0 / (scale_ * std::sqrt(2.0 * std::numbers::pi));
    case ErrorFamily::laplace: return 1.0 / (2.0 * scale_);
    case ErrorFamily::cauchy: return 1.0 / (std::numbers::pi * scale_);
    case ErrorFamily::none: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double ErrorDist::variance() const {
  switch (family_) {
    case ErrorFamily::normal: return scale_ * scale_;
    case ErrorFamily::laplace: return 2.0 * scale_ * scale_;
    case ErrorFamily::none: return 0.0;
    case ErrorFamily::cauchy: break;
  }
  throw NumericalError("Cauchy errors have no variance");
}

std::mt19937_64 make_engine(SeedSpec seed) {
  // splitmix64 finalizer over both words, then a seed_seq so nearby seeds do
  // not produce correlated mt states.
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  const std::uint64_t a = mix(seed.master_seed);
  const std::uint64_t b = mix(a ^ mix(seed.stream_id + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

double pi_case_a(double x) {
  const double dev = std::abs(x - 1.0);
  return dev <= 1.0 ? 0.8 + 0.2 * dev : 0.95;
}

MissingnessRule MissingnessRule::case_a() {
  return {Kind::case_a, [](const Vec& x) { return pi_case_a(x[0]); }};
}

MissingnessRule MissingnessRule::case_b() { return {Kind::case_b, [](const Vec&) { return 0.8; }}; }

MissingnessRule MissingnessRule::constant(double probability) {
  if (!(probability > 0.0 && probability <= 1.0)) {
    throw DataError(fmt::format("selection probability must be in (0, 1], got {}", probability));
  }
  return {Kind::custom, [probability](const Vec&) { return probability; }};
}

MissingnessRule MissingnessRule::custom(std::function<double(const Vec& x)> pi) {
  return {Kind::custom, std::move(pi)};
}

std::string to_string(MissingnessRule::Kind kind) {
  switch (kind) {
    case MissingnessRule::Kind::case_a: return "a";
    case MissingnessRule::Kind::case_b: return "b";
    case MissingnessRule::Kind::custom: return "custom";
  }
  return "custom";
}

std::size_t ObservedDataset::complete_count() const {
  std::size_t count = 0;
  for (const auto& row : rows) count += row.observed() ? 1 : 0;
  return count;
}

void ObservedDataset::validate() const {
  if (rows.empty()) throw DataError("dataset has no rows");
  const auto dim = rows.front().x.size();
  if (dim < 1) throw DataError("dataset rows need at least one covariate");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.x.size() != dim) throw DataError(fmt::format("row {}: covariate dimension mismatch", i));
    if (!row.x.allFinite()) throw DataError(fmt::format("row {}: non-finite covariate", i));
    if (row.y && !std::isfinite(*row.y)) throw DataError(fmt::format("row {}: non-finite response", i));
  }
}

double draw_error(const ErrorDist& dist, std::mt19937_64& engine) {
  switch (dist.family()) {
    case ErrorFamily::normal: return std::normal_distribution<double>(0.0, dist.scale())(engine);
    case ErrorFamily::laplace: {
      // Difference of two iid exponentials is Laplace(0, scale).
      std::exponential_distribution<double> expo(1.0 / dist.scale());
      const double a = expo(engine);
      return a - expo(engine);
    }
    case ErrorFamily::cauchy: return std::cauchy_distribution<double>(0.0, dist.scale())(engine);
    case ErrorFamily::none: return 0.0;
  }
  return 0.0;
}

std::vector<double> sample_error(const ErrorDist& dist, SeedSpec seed, std::size_t count) {
  auto engine = make_engine(seed);
  std::vector<double> out(count);
  for (auto& e : out) e = draw_error(dist, engine);
  return out;
}

ObservedDataset generate_dataset(const RegressionModel& model, const Vec& beta0,
                                 const CovariateSpec& xdist, const ErrorDist& edist,
                                 const MissingnessRule& rule, std::size_t n, SeedSpec seed) {
  if (n < 1) throw DataError("n must be at least 1");
  if (!rule.pi) throw DataError("missingness rule has no selection function");
  if (!(xdist.sd > 0.0)) throw DataError("covariate sd must be positive");
  auto engine = make_engine(seed);
  std::normal_distribution<double> xnorm(xdist.mean, xdist.sd);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  ObservedDataset data;
  data.rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec x(model.p());
    for (int k = 0; k < model.p(); ++k) x[k] = xnorm(engine);
    const double mean = model.value(x, beta0);
    const double y = mean + draw_error(edist, engine);
    const double pi = rule.pi(x);
    const bool observed = unif(engine) < pi;
    data.rows.push_back({std::move(x), observed ? std::optional<double>(y) : std::nullopt});
  }
  return data;
}

}  // namespace elmiss
