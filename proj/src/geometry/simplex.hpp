#pragma once

#include <cstddef>
#include <vector>

#include "tropic/geometry.hpp"

namespace tropic::geometry::detail {

/// max c.y  s.t.  A y = b,  y >= 0   (A is rows x cols, row-major)
struct StandardForm {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> a;
  Vector b;
  Vector c;

  Rational& at(std::size_t r, std::size_t k) { return a[r * cols + k]; }
};

struct SimplexResult {
  LpStatus status = LpStatus::infeasible;
  Vector y;
  Rational value;
};

SimplexResult solve_standard(StandardForm lp);

}  // namespace tropic::geometry::detail
