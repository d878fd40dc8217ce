#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tropic/geometry.hpp"
#include "tropic/network.hpp"

namespace tropic::arrangement {

using geometry::ConstraintSystem;
using network::LayerSpec;
using network::NetworkSpec;

/// Work limits for the brute-force enumerators.
struct Budget {
  std::uint64_t max_signatures = 100'000;
  std::uint64_t max_lp_calls = 1'000'000;

  /// Defaults, with max_lp_calls taken from TROPIC_BUDGET_LP when set.
  static Budget from_env();
};

/// Nonempty codimension-1 indecision boundary H^i_{ab}: the points where
/// preactivations a and b of unit i tie for the maximum.
struct Atom {
  std::size_t unit = 0;
  std::size_t a = 0;  // 0-based preactivation indices, a < b
  std::size_t b = 0;
  ConstraintSystem geometry;
};

struct Arrangement {
  std::size_t ambient_dim = 0;
  std::size_t unit_count = 0;
  std::vector<Atom> atoms;
  bool central = false;  // built from a bias-free layer
};

/// All and only the codimension-1 atoms of the layer. Identical
/// preactivations are merged first; rank-1 units contribute nothing.
Arrangement build_atoms(const LayerSpec& layer);

/// Relatively open set of inputs whose per-unit argmax set is exactly
/// `signature[i]` (0-based preactivation indices).
struct Cell {
  std::vector<std::vector<std::size_t>> signature;
  int dim = 0;
  bool bounded = false;
  Vector witness;
};

struct RegionCount {
  std::uint64_t regions = 0;
  std::uint64_t bounded_regions = 0;

  bool operator==(const RegionCount&) const = default;
};

/// Every nonempty signature cell, in canonical DFS order. The OpenMP
/// kernel splits the signature tree at a shallow depth and concatenates
/// subtrees in order, so it returns exactly what the serial one does.
std::vector<Cell> enumerate_cells(const LayerSpec& layer, const Budget& budget = Budget::from_env());
std::vector<Cell> enumerate_cells_serial(const LayerSpec& layer, const Budget& budget = Budget::from_env());

/// Full-dimensional cells (one strict argmax per unit) and how many of
/// them are bounded.
RegionCount count_regions_bruteforce(const LayerSpec& layer, const Budget& budget = Budget::from_env());
RegionCount count_regions_bruteforce_serial(const LayerSpec& layer, const Budget& budget = Budget::from_env());

/// Full-dimensional activation-pattern cells of a deep network, found by
/// refining each cell layer by layer.
std::uint64_t count_regions_deep(const NetworkSpec& net, const Budget& budget = Budget::from_env());

struct PosetElement {
  std::size_t id = 0;
  ConstraintSystem geometry;
  int dim = 0;
  int psi = 0;
  /// Units owning an atom that contains the element; empty for the
  /// ambient space, nullopt for the origin of a central arrangement.
  std::optional<std::vector<std::size_t>> support;
  /// Every atom containing the element (sorted). The element is the
  /// intersection of these, so this set identifies it.
  std::vector<std::size_t> atoms;
  /// The atom subset that first produced the element.
  std::vector<std::size_t> generator;
};

/// Intersection poset ordered by reverse inclusion; element 0 is the
/// ambient space.
struct Poset {
  std::size_t ambient_dim = 0;
  std::vector<PosetElement> elements;
  std::vector<std::vector<char>> leq;          // leq[x][y]: x <= y, i.e. y is a subset of x
  std::vector<std::vector<long long>> mobius;  // mu(x, y)
  std::vector<std::pair<std::size_t, std::size_t>> covers;

  long long mu(std::size_t y) const { return mobius[0][y]; }
};

Poset build_poset(const Arrangement& arr, std::size_t max_elements = 20'000);

/// (-1)^n * sum_y psi(y) mu(y).
long long count_regions_poset(const Poset& poset);
long long count_regions_poset(const Arrangement& arr);

/// Number of s-faces, 0 <= s < ambient dim. Throws PreconditionError
/// otherwise.
long long count_faces_poset(const Poset& poset, int s);

struct SimplicityCertificate {
  bool simple = true;
  std::vector<std::size_t> violating_atoms;  // indices into Arrangement::atoms
};

/// Any j atoms of distinct units meet in codimension j or not at all (or
/// only in the origin, for central arrangements). Subsets up to size
/// ambient_dim + 1 are checked.
SimplicityCertificate is_simple(const Arrangement& arr);

struct IdentityCheck {
  long long lhs = 0;
  long long rhs = 0;
};

/// Region count of a simple bias layer (m >= n+1) against the alternating
/// sum over sub-arrangements of at most n units.
IdentityCheck subsum_identity_noncentral(const LayerSpec& layer, const Budget& budget = Budget::from_env());

/// Same for a simple bias-free layer on Q^(n+1), with the extra
/// binom(m-1, n) term.
IdentityCheck subsum_identity_central(const LayerSpec& layer, const Budget& budget = Budget::from_env());

struct GapReport {
  std::uint64_t r_A = 0;
  std::uint64_t r_Ag = 0;
  long long gap = 0;
  long long floor = 0;
};

/// Regions of a simple central layer on Q^(n+1) versus regions of the
/// arrangement it induces on g = {x : <x, w> = offset}. offset must be
/// nonzero so that g misses the origin.
GapReport bounded_region_gap(const LayerSpec& layer, const Vector& w, const Rational& offset = 1,
                             const Budget& budget = Budget::from_env());

/// The layer as a function of z, restricted to x = origin + sum_i z_i dirs[i].
/// Always a bias layer on Q^dirs.size().
LayerSpec restrict_to_affine(const LayerSpec& layer, const Vector& origin, const std::vector<Vector>& dirs);

}  // namespace tropic::arrangement
