#include "elmiss/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "elmiss/chwirut1.hpp"
#include "elmiss/error.hpp"

namespace elmiss {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, const std::string& source, std::size_t line,
                    const std::string& column) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw DataError(fmt::format("{}:{}: column '{}': cannot parse '{}' as a number", source, line,
                                column, text));
  }
  return v;
}

}  // namespace

ObservedDataset parse_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw DataError(fmt::format("{}: missing header", source));

  int y_col = -1;
  int delta_col = -1;
  std::vector<int> x_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& name = header[c];
    if (name == "y") {
      y_col = static_cast<int>(c);
    } else if (name == "delta") {
      delta_col = static_cast<int>(c);
    } else if (name == "x" || (name.size() > 1 && name[0] == 'x' &&
                               name.find_first_not_of("0123456789", 1) == std::string::npos)) {
      x_cols.push_back(static_cast<int>(c));
    } else {
      throw DataError(fmt::format("{}:{}: unexpected column '{}'", source, lineno, name));
    }
  }
  if (y_col < 0 || x_cols.empty()) {
    throw DataError(fmt::format("{}:{}: header needs x1..xp and y columns", source, lineno));
  }

  ObservedDataset data;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw DataError(fmt::format("{}:{}: expected {} fields, found {}", source, lineno,
                                  header.size(), fields.size()));
    }
    Observation row;
    row.x.resize(static_cast<Eigen::Index>(x_cols.size()));
    for (std::size_t k = 0; k < x_cols.size(); ++k) {
      const auto c = static_cast<std::size_t>(x_cols[k]);
      if (fields[c].empty()) {
        throw DataError(fmt::format("{}:{}: covariate '{}' is empty", source, lineno, header[c]));
      }
      row.x[static_cast<Eigen::Index>(k)] = parse_number(fields[c], source, lineno, header[c]);
    }
    const auto& ytext = fields[static_cast<std::size_t>(y_col)];
    if (!ytext.empty()) row.y = parse_number(ytext, source, lineno, "y");
    if (delta_col >= 0) {
      const auto& dtext = fields[static_cast<std::size_t>(delta_col)];
      if (dtext != "0" && dtext != "1") {
        throw DataError(fmt::format("{}:{}: delta must be 0 or 1, got '{}'", source, lineno, dtext));
      }
      if ((dtext == "1") != row.observed()) {
        throw DataError(fmt::format("{}:{}: delta={} contradicts {} y", source, lineno, dtext,
                                    row.observed() ? "a present" : "an empty"));
      }
    }
    data.rows.push_back(std::move(row));
  }
  try {
    data.validate();
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", source, e.what()));
  }
  return data;
}

ObservedDataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  return parse_csv(in, path.string());
}

void write_csv(const ObservedDataset& data, std::ostream& out) {
  const int p = data.p();
  for (int k = 0; k < p; ++k) fmt::print(out, "x{},", k + 1);
  fmt::print(out, "y,delta\n");
  for (const auto& row : data.rows) {
    for (Eigen::Index k = 0; k < row.x.size(); ++k) fmt::print(out, "{},", row.x[k]);
    if (row.y) fmt::print(out, "{}", *row.y);
    fmt::print(out, ",{}\n", row.delta());
  }
}

void write_csv(const ObservedDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  write_csv(data, out);
}

void write_imputed_csv(const ImputedDataset& imp, std::ostream& out) {
  fmt::print(out, "x,y_observed,delta,pi_hat,y_imputed\n");
  for (std::size_t i = 0; i < imp.n(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const auto& x = imp.x[i];
    std::string xs;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      if (k) xs += ";";
      xs += fmt::format("{:.6g}", x[k]);
    }
    const auto& y = imp.y_observed[i];
    fmt::print(out, "{},{},{},{:.6g},{:.6g}\n", xs, y ? fmt::format("{:.6g}", *y) : "",
               y ? 1 : 0, imp.pi_hat.values[idx], imp.y_tilde[idx]);
  }
}

ObservedDataset load_chwirut1() {
  ObservedDataset data;
  data.rows.reserve(kChwirut1Rows);
  for (const auto& r : chwirut1_rows()) {
    Vec x(1);
    x[0] = r.x;
    data.rows.push_back({std::move(x), r.y});
  }
  return data;
}

ObservedDataset mask_missing(const ObservedDataset& data, double rate, SeedSpec seed) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw DataError(fmt::format("mask rate must be in [0, 1), got {}", rate));
  }
  if (data.complete_count() != data.n()) throw DataError("mask_missing needs fully observed data");
  auto engine = make_engine(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  ObservedDataset out = data;
  for (auto& row : out.rows) {
    if (unif(engine) < rate) row.y.reset();
  }
  return out;
}

}  // namespace elmiss
