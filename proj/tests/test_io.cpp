#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "elmiss/chwirut1.hpp"
#include "elmiss/error.hpp"
#include "elmiss/estimators.hpp"
#include "elmiss/io.hpp"

using namespace elmiss;

namespace {

ObservedDataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in, "test.csv");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("missing responses from blank fields") {
    const auto d = parse("x,y\n1,2\n2,3\n3,\n4,5\n");
    REQUIRE(d.n() == 4);
    CHECK(d.rows[2].delta() == 0);
    CHECK(d.complete_count() == 3);
    CHECK(d.rows[3].y == 5.0);
  }

  TEST_CASE("delta column") {
    const auto d = parse("x1,x2,y,delta\n1,0.5,2,1\n2,0.25,,0\n");
    CHECK(d.p() == 2);
    CHECK(d.rows[1].delta() == 0);
    CHECK(d.rows[0].x[1] == 0.5);
  }

  TEST_CASE("malformed input names the line") {
    CHECK(error_of("x,y,delta\n1,2,1\n2,,1\n").find("test.csv:3:") != std::string::npos);
    CHECK(error_of("x,y,delta\n1,2,0\n").find("test.csv:2:") != std::string::npos);
    CHECK(error_of("x,y\n1,2\nabc,3\n").find("test.csv:3:") != std::string::npos);
    CHECK(error_of("x,y\n1,2,3\n").find("test.csv:2:") != std::string::npos);
    CHECK(error_of("x,y,delta\n1,2,2\n").find("test.csv:2:") != std::string::npos);
    CHECK_FALSE(error_of("a,b\n1,2\n").empty());
    CHECK_FALSE(error_of("").empty());
    CHECK_FALSE(error_of("x,y\n").empty());
  }

  TEST_CASE("round trip is exact") {
    auto d = generate_dataset(make_two_compartment(), (Vec(2) << 1.0, 1.5).finished(), {},
                              ErrorDist::cauchy(1.0), MissingnessRule::case_b(), 200, {51, 0});
    const auto path = std::filesystem::temp_directory_path() / "elmiss_roundtrip.csv";
    write_csv(d, path);
    const auto back = load_csv(path);
    std::filesystem::remove(path);
    REQUIRE(back.n() == d.n());
    bool same = true;
    for (std::size_t i = 0; i < d.n(); ++i) {
      same = same && back.rows[i].x == d.rows[i].x && back.rows[i].y == d.rows[i].y;
    }
    CHECK(same);
  }

  TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_csv("/nonexistent/elmiss.csv"), DataError);
  }

  TEST_CASE("Chwirut1") {
    const auto d = load_chwirut1();
    CHECK(d.n() == 214);
    CHECK(d.complete_count() == 214);
    for (const auto& row : d.rows) {
      CHECK(row.x[0] > 0.0);
      CHECK(*row.y > 0.0);
    }
    // First and last rows of the NIST file.
    CHECK(d.rows.front().x[0] == 0.5);
    CHECK(*d.rows.front().y == 92.9);
    CHECK(d.rows.back().x[0] == 1.75);
    CHECK(*d.rows.back().y == 28.95);
    const auto fit = fit_ls(d, make_chwirut_rational(),
                            Eigen::Map<const Vec>(kChwirut1Start.data(), 3));
    CHECK(fit.converged);
  }

  TEST_CASE("masking") {
    const auto d = load_chwirut1();
    CHECK(mask_missing(d, 0.0, {1, 0}).complete_count() == 214);
    const auto a = mask_missing(d, 0.3, {1, 5});
    const auto b = mask_missing(d, 0.3, {1, 5});
    bool same = true;
    for (std::size_t i = 0; i < d.n(); ++i) same = same && a.rows[i].y == b.rows[i].y;
    CHECK(same);
    double missing = 0.0;
    for (std::uint64_t k = 0; k < 2000; ++k) {
      missing += static_cast<double>(d.n() - mask_missing(d, 0.5, {2, k}).complete_count());
    }
    missing /= 2000.0;
    CHECK(missing > 102.0);
    CHECK(missing < 112.0);
    CHECK_THROWS_AS(mask_missing(d, 1.0, {1, 0}), DataError);
    CHECK_THROWS_AS(mask_missing(d, -0.1, {1, 0}), DataError);
    CHECK_THROWS_AS(mask_missing(a, 0.2, {1, 0}), DataError);
  }
}
