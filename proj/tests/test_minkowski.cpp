#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tropic/arrangement.hpp"
#include "tropic/errors.hpp"
#include "tropic/minkowski.hpp"

using namespace tropic;
using namespace tropic::minkowski;
using network::BiasMode;
using testing::vec;

namespace {

LabeledPointSet segment_triangle_sum() {
  return parse_point_set(testing::slurp(testing::data_path("segment_plus_triangle_sum.json")));
}

}  // namespace

TEST_CASE("lifting layers") {
  const auto relu = lift_layer(testing::relu_layer());
  REQUIRE(relu.size() == 1);
  CHECK(relu[0].points == std::vector<Vector>{vec({1, 0}), vec({0, 0})});

  const auto layer = network::parse_network(testing::slurp(testing::data_path("segment_plus_triangle.json")));
  const auto sets = lift_layer(layer.layers[0]);
  CHECK(sets[0].points == std::vector<Vector>{vec({0, 0, 0}), vec({2, 2, 0})});
  CHECK(sets[1].points == std::vector<Vector>{vec({1, 0, 1}), vec({0, 1, 1}), vec({1, 1, 0})});

  const network::LayerSpec repeated{1, BiasMode::no_bias, {testing::unit({{2}, {2}, {0}}, {})}};
  CHECK(lift_layer(repeated)[0].points.size() == 2);
}

TEST_CASE("Minkowski sums") {
  const auto layer = network::parse_network(testing::slurp(testing::data_path("segment_plus_triangle.json")));
  const auto sum = minkowski_sum(lift_layer(layer.layers[0]));
  CHECK(sum.points == segment_triangle_sum().points);

  const auto a = make_point_set(2, {vec({0, 0}), vec({1, 3})});
  const auto p = make_point_set(2, {vec({5, -1})});
  CHECK(minkowski_sum({a, p}).points == std::vector<Vector>{vec({5, -1}), vec({6, 2})});
  CHECK(minkowski_sum({p, p}).points == std::vector<Vector>{vec({10, -2})});
  CHECK_THROWS_AS(minkowski_sum({a, make_point_set(3, {vec({0, 0, 0})})}), InputError);
}

TEST_CASE("vertex classification") {
  const auto cls = classify_vertices(segment_triangle_sum());
  CHECK(cls.vertices == 6);
  CHECK(cls.upper == 5);
  CHECK(cls.strict_lower == 1);
  const auto& pts = segment_triangle_sum().points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i] == vec({1, 1, 0})) CHECK(cls.flags[i].strict_lower);
  }

  const auto horizontal = classify_vertices(make_point_set(2, {vec({0, 0}), vec({1, 0})}));
  CHECK(horizontal.vertices == 2);
  CHECK(horizontal.upper == 2);

  const auto vertical = classify_vertices(make_point_set(2, {vec({0, 0}), vec({0, 1})}));
  CHECK(vertical.vertices == 2);
  CHECK(vertical.upper == 1);
  CHECK(vertical.strict_lower == 1);
  CHECK(vertical.flags[1].upper);
  CHECK(vertical.flags[0].strict_lower);

  // Interior and edge-midpoint points are not vertices.
  const auto square = classify_vertices(
      make_point_set(2, {vec({0, 0}), vec({2, 0}), vec({0, 2}), vec({2, 2}), vec({1, 1}), vec({1, 0})}));
  CHECK(square.vertices == 4);
  CHECK_FALSE(square.flags[4].vertex);
  CHECK_FALSE(square.flags[5].vertex);
}

TEST_CASE("classification partitions vertices and ignores translation") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> coord(-4, 4), count(1, 9), dim(2, 3);
  for (int i = 0; i < 40; ++i) {
    const std::size_t d = static_cast<std::size_t>(dim(rng));
    std::vector<Vector> pts(static_cast<std::size_t>(count(rng)), Vector(d));
    for (auto& p : pts) {
      for (auto& x : p) x = coord(rng);
    }
    const auto set = make_point_set(d, pts);
    const auto cls = classify_vertices(set);
    CHECK(cls.upper + cls.strict_lower + cls.horizontal_only == cls.vertices);
    CHECK(cls.horizontal_only == 0);
    for (const auto& f : cls.flags) {
      if (f.upper || f.strict_lower) CHECK(f.vertex);
      CHECK(!(f.upper && f.strict_lower));
    }
    Vector shift(d);
    for (auto& x : shift) x = Rational(coord(rng), 3);
    std::vector<Vector> moved;
    for (const auto& p : set.points) moved.push_back(p + shift);
    CHECK(classify_vertices(make_point_set(d, moved)).flags == cls.flags);
    CHECK(classify_vertices_serial(set) == cls);
  }
}

TEST_CASE("duality between regions and vertices") {
  const auto ex = duality_check(testing::two_unit_layer());
  CHECK(ex.region_count == 8);
  CHECK(ex.vertex_count == 8);
  const auto opt = duality_check(network::construct_shallow_optimal(2, {3, 3}, 1));
  CHECK(opt.region_count == 9);
  CHECK(opt.vertex_count == 9);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto single = duality_check(network::sample_generic(2, {4}, BiasMode::with_bias, seed));
    CHECK(single.region_count == single.vertex_count);
    const auto nb = duality_check(network::sample_generic(2, {3, 2, 3}, BiasMode::no_bias, seed));
    CHECK(nb.region_count == nb.vertex_count);
  }
}

TEST_CASE("upper-vertex identity") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto segs = sample_general_family(1, 3, 2, seed);
    const auto s = weibel_upper_identity(segs.sets);
    CHECK(s.lhs == s.rhs);
    const auto tris = sample_general_family(2, 4, 3, seed);
    const auto t = weibel_upper_identity(tris.sets);
    CHECK(t.lhs == t.rhs);
  }
  const auto two = sample_general_family(2, 2, 3, 1);
  CHECK_THROWS_AS(weibel_upper_identity(two.sets), PreconditionError);
}

TEST_CASE("gap floor in vertex form") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto fam = sample_general_family(1, 3, 3, seed);
    const auto cls = classify_vertices(sum_of_vertices(fam.sets));
    CHECK(cls.vertices - cls.upper >= 2);  // C(m-1, n) = C(2, 1)
  }
}

TEST_CASE("partial sums of optimal constructions attain the trivial bound") {
  const auto sets = lift_layer(network::construct_shallow_optimal(2, {3, 3}, 1));
  const auto parts = partial_sum_trivial_bound(sets, 2);
  REQUIRE(parts.size() == 3);
  for (const auto& p : parts) {
    CHECK(p.actual == p.trivial);
    if (p.subset.size() == 2) CHECK(p.actual == 9);
  }

  const auto twice = make_point_set(2, {vec({0, 0}), vec({1, 0}), vec({0, 1})});
  const auto degenerate = partial_sum_trivial_bound({twice, twice}, 2);
  for (const auto& p : degenerate) {
    if (p.subset.size() == 2) {
      CHECK(p.actual == 3);
      CHECK(p.trivial == 9);
    } else {
      CHECK(p.actual == p.trivial);
    }
  }
}

TEST_CASE("point-set JSON") {
  const auto set = segment_triangle_sum();
  CHECK(set.dim == 3);
  CHECK(set.label == "segment + triangle");
  CHECK(parse_point_set(serialize_point_set(set)) == set);
  CHECK_THROWS_AS(parse_point_set(R"({"dim": 2, "points": [[1, 2, 3]]})"), InputError);
  CHECK_THROWS_AS(parse_point_set(R"({"dim": 2, "points": [[1, 0.5]]})"), InputError);
}
