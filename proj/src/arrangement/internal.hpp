#pragma once

#include <cstdint>
#include <vector>

#include "tropic/arrangement.hpp"

namespace tropic::arrangement::detail {

struct AffineForm {
  Vector w;
  Rational b;

  bool operator==(const AffineForm&) const = default;
};

/// Distinct preactivations of one unit. members[c] lists the original
/// preactivation indices equal to forms[c], ascending; classes are ordered
/// by their smallest member.
struct UnitClasses {
  std::vector<AffineForm> forms;
  std::vector<std::vector<std::size_t>> members;
};

UnitClasses unit_classes(const network::MaxoutUnitSpec& unit, std::size_t dim);
std::vector<UnitClasses> layer_classes(const LayerSpec& layer);

/// lhs(x) >= rhs(x) as a ConstraintSystem row.
void add_dominance(ConstraintSystem& sys, const AffineForm& lhs, const AffineForm& rhs);
/// lhs(x) = rhs(x).
void add_tie(ConstraintSystem& sys, const AffineForm& lhs, const AffineForm& rhs);

Rational value(const AffineForm& f, const Vector& x);

/// Throws BudgetExceeded once more than budget.max_lp_calls simplex solves
/// happened since `start` (a geometry::lp_call_count() reading).
void check_lp_budget(std::uint64_t start, const Budget& budget);

/// Throws BudgetExceeded when prod (2^k_i - 1) exceeds max_signatures.
void check_signature_budget(const LayerSpec& layer, const Budget& budget);

long long binomial(long long n, long long k);

}  // namespace tropic::arrangement::detail
