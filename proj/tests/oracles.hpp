#pragma once

#include <random>

#include "support.hpp"
#include "tropic/geometry.hpp"

namespace tropic::testing {

using geometry::ConstraintSystem;

// Sum of (-1)^dim over the relatively open faces, each face being the set
// where exactly a given subset of inequalities is tight.
inline int euler_by_faces(const ConstraintSystem& sys) {
  const auto& ineqs = sys.inequalities();
  const std::size_t count = ineqs.size();
  int chi = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << count); ++mask) {
    ConstraintSystem face(sys.dim());
    for (const auto& e : sys.equalities()) face.add_equality(e.coeffs, e.rhs);
    for (std::size_t i = 0; i < count; ++i) {
      if (mask >> i & 1) {
        face.add_equality(ineqs[i].coeffs, ineqs[i].rhs);
      } else {
        face.add_inequality(ineqs[i].coeffs, ineqs[i].rhs);
      }
    }
    if (!geometry::strictly_feasible(face)) continue;
    std::vector<Vector> rows;
    for (const auto& e : face.equalities()) rows.push_back(e.coeffs);
    const int dim = static_cast<int>(sys.dim() - geometry::rank(rows, sys.dim()));
    chi += dim % 2 == 0 ? 1 : -1;
  }
  return chi;
}

inline ConstraintSystem random_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim_d(1, 3), count_d(0, 6), coef(-3, 3), eq_d(0, 4);
  const std::size_t d = static_cast<std::size_t>(dim_d(rng));
  ConstraintSystem s(d);
  if (eq_d(rng) == 0) {
    Vector a(d);
    for (auto& x : a) x = coef(rng);
    s.add_equality(std::move(a), coef(rng));
  }
  const int count = count_d(rng);
  for (int i = 0; i < count; ++i) {
    Vector a(d);
    for (auto& x : a) x = coef(rng);
    s.add_inequality(std::move(a), coef(rng));
  }
  return s;
}

}  // namespace tropic::testing
