#pragma once

#include <array>
#include <cstddef>

namespace elmiss {

inline constexpr std::size_t kChwirut1Rows = 214;

struct Chwirut1Row {
  double x;  // metal distance
  double y;  // ultrasonic response
};

const std::array<Chwirut1Row, kChwirut1Rows>& chwirut1_rows();

// NIST certified LS estimates for exp(-b1 x) / (b2 + b3 x) on Chwirut1.
inline constexpr std::array<double, 3> kChwirut1Certified = {1.9027818370E-01, 6.1314004477E-03,
                                                             1.0530908399E-02};
// NIST "Start 1" values.
inline constexpr std::array<double, 3> kChwirut1Start = {0.1, 0.01, 0.02};

}  // namespace elmiss
