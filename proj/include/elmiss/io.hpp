#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "elmiss/impute.hpp"
#include "elmiss/sampling.hpp"

namespace elmiss {

// CSV with header x1,...,xp,y[,delta] ("x" is accepted for p = 1). An empty
// y marks a missing response; delta, when present, must agree with it.
// Throws DataError naming the offending line.
ObservedDataset load_csv(const std::filesystem::path& path);
ObservedDataset parse_csv(std::istream& in, const std::string& source = "<stream>");

// Writes the dataset with round-trip precision so load_csv reproduces it.
void write_csv(const ObservedDataset& data, const std::filesystem::path& path);
void write_csv(const ObservedDataset& data, std::ostream& out);

// Columns x, y_observed (blank if missing), delta, pi_hat, y_imputed at six
// significant digits.
void write_imputed_csv(const ImputedDataset& imp, std::ostream& out);

// The 214 NIST Chwirut1 observations, fully observed.
ObservedDataset load_chwirut1();

// Drops each response independently with probability `rate` in [0, 1).
ObservedDataset mask_missing(const ObservedDataset& data, double rate, SeedSpec seed);

}  // namespace elmiss
