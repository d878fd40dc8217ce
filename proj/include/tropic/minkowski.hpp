#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tropic/arrangement.hpp"
#include "tropic/network.hpp"
#include "tropic/rational.hpp"

namespace tropic::minkowski {

/// Finite point configuration in Q^dim. Points are distinct and kept in
/// first-seen order.
struct LabeledPointSet {
  std::size_t dim = 0;
  std::vector<Vector> points;
  std::string label;

  bool operator==(const LabeledPointSet&) const = default;
};

/// Validates dimensions and drops repeated points.
LabeledPointSet make_point_set(std::size_t dim, const std::vector<Vector>& points, std::string label = {});

LabeledPointSet parse_point_set(const std::string& json_text);
std::string serialize_point_set(const LabeledPointSet& set);

/// Per unit, its coefficient points: (w, b) in Q^(n+1) with biases, w in
/// Q^n without. Repeated preactivations collapse.
std::vector<LabeledPointSet> lift_layer(const network::LayerSpec& layer);

/// All sums p_1 + ... + p_m, deduplicated, in lexicographic order.
LabeledPointSet minkowski_sum(const std::vector<LabeledPointSet>& sets);

struct VertexFlags {
  bool vertex = false;
  bool upper = false;         // some strictly separating normal has last coordinate > 0
  bool strict_lower = false;  // only normals with last coordinate < 0 separate it
  bool horizontal_only() const { return vertex && !upper && !strict_lower; }

  bool operator==(const VertexFlags&) const = default;
};

struct VertexClassification {
  std::vector<VertexFlags> flags;  // parallel to the input points
  std::size_t vertices = 0;
  std::size_t upper = 0;
  std::size_t strict_lower = 0;
  std::size_t horizontal_only = 0;

  bool operator==(const VertexClassification&) const = default;
};

/// Exact per-point LP classification. The OpenMP version splits the points
/// across threads; both return identical results.
VertexClassification classify_vertices(const LabeledPointSet& set);
VertexClassification classify_vertices_serial(const LabeledPointSet& set);

/// Vertices of the sum, computed as the sum of the summands' vertices
/// (same convex hull, far fewer candidates).
LabeledPointSet sum_of_vertices(const std::vector<LabeledPointSet>& sets);

/// Upper vertices of the lifted sum (bias layer) or all vertices of the
/// weight sum (bias-free layer).
std::uint64_t dual_region_count(const network::LayerSpec& layer);

struct DualityReport {
  std::uint64_t region_count = 0;
  std::uint64_t vertex_count = 0;
};

DualityReport duality_check(const network::LayerSpec& layer,
                            const arrangement::Budget& budget = arrangement::Budget::from_env());

struct IdentitySides {
  long long lhs = 0;
  long long rhs = 0;
};

/// Upper vertices of the whole sum against sum_{j<=n} (-1)^(n-j)
/// C(m-1-j, n-j) sum_{|S|=j} f_0(P_S^+), with f_0(P_empty^+) = 1 and n = dim - 1.
IdentitySides weibel_upper_identity(const std::vector<LabeledPointSet>& sets);

/// The sets read as a bias layer (point (a, b) is the preactivation
/// <a, x> + b) is simple, every unit has an atom, and every set has at
/// least two points. The checkable stand-in for general orientation.
bool general_orientation(const std::vector<LabeledPointSet>& sets);

struct SampledFamily {
  std::vector<LabeledPointSet> sets;
  std::size_t resamples = 0;
};

/// m seeded integer point sets in Q^(n+1) with 2..max_points points each,
/// resampled until general_orientation holds.
SampledFamily sample_general_family(std::size_t n, std::size_t m, std::size_t max_points, std::uint64_t seed,
                                    std::int64_t bound = 6, std::size_t max_tries = 500);

struct PartialSum {
  std::vector<std::size_t> subset;  // 0-based
  std::uint64_t actual = 0;         // f_0 of the partial sum
  Integer trivial;                  // product of the summands' f_0
};

/// Every nonempty S with |S| <= n.
std::vector<PartialSum> partial_sum_trivial_bound(const std::vector<LabeledPointSet>& sets, std::size_t n);

}  // namespace tropic::minkowski
