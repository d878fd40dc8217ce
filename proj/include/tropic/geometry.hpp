#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tropic/rational.hpp"

namespace tropic::geometry {

/// One affine constraint `coeffs . x (op) rhs`.
struct LinearConstraint {
  Vector coeffs;
  Rational rhs;

  bool operator==(const LinearConstraint&) const = default;
};

/// A convex polyhedron in Q^d given by equalities `a.x = r` and
/// inequalities `a.x >= r`. No constraints means all of Q^d.
class ConstraintSystem {
 public:
  explicit ConstraintSystem(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  const std::vector<LinearConstraint>& equalities() const { return equalities_; }
  const std::vector<LinearConstraint>& inequalities() const { return inequalities_; }

  void add_equality(Vector coeffs, Rational rhs);
  /// Adds `coeffs . x >= rhs`.
  void add_inequality(Vector coeffs, Rational rhs);

  /// Set intersection: the union of both constraint lists.
  ConstraintSystem intersect(const ConstraintSystem& other) const;

  bool satisfied_by(const Vector& x) const;

  /// Throws InputError if some coefficient vector has the wrong length.
  void validate() const;

  bool operator==(const ConstraintSystem&) const = default;

 private:
  std::size_t dim_;
  std::vector<LinearConstraint> equalities_;
  std::vector<LinearConstraint> inequalities_;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vector point;    // optimal point when status == optimal
  Rational value;  // optimal objective value when status == optimal
};

/// Exact maximization of `objective . x` over the system (x free).
/// Two-phase dense simplex with Bland's rule, so it always terminates and
/// the returned point is a deterministic function of the input.
LpResult maximize(const ConstraintSystem& sys, const Vector& objective);

/// Some point of the polyhedron, or nullopt when it is empty.
std::optional<Vector> feasible(const ConstraintSystem& sys);

/// A point satisfying every equality and every inequality strictly. Solved
/// as one LP that maximizes a shared slack margin t <= 1.
std::optional<Vector> strictly_feasible(const ConstraintSystem& sys);

/// Dimension of the affine hull; nullopt for the empty set.
std::optional<int> affine_dimension(const ConstraintSystem& sys);

struct RecessionProfile {
  int lineality_dim = 0;
  /// True iff the recession cone equals the lineality space, i.e. the
  /// polyhedron is a polytope plus a linear subspace.
  bool pointed_part_bounded = true;

  bool operator==(const RecessionProfile&) const = default;
};

/// Throws EmptyPolyhedron on an empty system.
RecessionProfile recession_profile(const ConstraintSystem& sys);

/// Compactly supported Euler characteristic of the closed polyhedron:
/// (-1)^lineality when the pointed part is bounded, 0 otherwise.
/// Throws EmptyPolyhedron on an empty system.
int euler_characteristic(const ConstraintSystem& sys);

/// True iff every point of `inner` satisfies `outer`. Both must be
/// nonempty.
bool contains(const ConstraintSystem& outer, const ConstraintSystem& inner);

/// Rank of a list of row vectors over Q.
std::size_t rank(const std::vector<Vector>& rows, std::size_t dim);

/// Basis of {v : row . v = 0 for every row}.
std::vector<Vector> nullspace_basis(const std::vector<Vector>& rows, std::size_t dim);

/// Total number of simplex solves performed by this process. Used for
/// LP-call budgets.
std::uint64_t lp_call_count();

}  // namespace tropic::geometry
