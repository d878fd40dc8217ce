#include <doctest.h>

#include <map>
#include <random>

#include "support.hpp"
#include "tropic/arrangement.hpp"
#include "tropic/bounds.hpp"
#include "tropic/errors.hpp"

using namespace tropic;
using namespace tropic::arrangement;
using network::BiasMode;
using network::LayerSpec;
using testing::unit;
using testing::vec;

namespace {

std::map<int, int> cells_by_dim(const std::vector<Cell>& cells) {
  std::map<int, int> out;
  for (const auto& c : cells) ++out[c.dim];
  return out;
}

// Three rays out of the origin plus a line through it.
LayerSpec central_3_2() {
  return {2, BiasMode::no_bias, {unit({{1, 0}, {0, 1}, {-1, -1}}, {}), unit({{1, -3}, {0, 0}}, {})}};
}

void check_mobius_recursion(const Poset& p) {
  const std::size_t n = p.elements.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t z = 0; z < n; ++z) {
      if (!p.leq[x][z]) continue;
      long long s = 0;
      for (std::size_t y = 0; y < n; ++y) {
        if (p.leq[x][y] && p.leq[y][z]) s += p.mobius[x][y];
      }
      CHECK(s == (x == z ? 1 : 0));
    }
  }
}

}  // namespace

TEST_CASE("atoms of small layers") {
  const auto relu = build_atoms(testing::relu_layer());
  REQUIRE(relu.atoms.size() == 1);
  CHECK(relu.atoms[0].geometry.satisfied_by(vec({0})));
  CHECK_FALSE(relu.atoms[0].geometry.satisfied_by(vec({1})));

  CHECK(build_atoms(testing::two_unit_layer()).atoms.size() == 6);

  const LayerSpec dominated{1, BiasMode::with_bias, {unit({{1}, {1}}, {0, 1})}};
  CHECK(build_atoms(dominated).atoms.empty());

  const LayerSpec rank_one{2, BiasMode::with_bias, {unit({{1, 1}}, {3})}};
  CHECK(build_atoms(rank_one).atoms.empty());
}

TEST_CASE("atom H^1_13 of the two-unit layer contains (-1, 1)") {
  const auto arr = build_atoms(testing::two_unit_layer());
  bool found = false;
  for (const auto& a : arr.atoms) {
    if (a.unit == 0 && a.a == 0 && a.b == 2) {
      found = true;
      CHECK(a.geometry.satisfied_by(vec({-1, 1})));
      CHECK(geometry::affine_dimension(a.geometry) == 1);
    }
  }
  CHECK(found);
}

TEST_CASE("cell enumeration") {
  SUBCASE("ReLU") {
    const auto cells = enumerate_cells(testing::relu_layer());
    CHECK(cells.size() == 3);
    const auto dims = cells_by_dim(cells);
    CHECK(dims.at(1) == 2);
    CHECK(dims.at(0) == 1);
  }
  SUBCASE("two-unit layer: 8 regions, 12 edges, 5 points") {
    const auto cells = enumerate_cells(testing::two_unit_layer());
    const auto dims = cells_by_dim(cells);
    CHECK(dims.at(2) == 8);
    CHECK(dims.at(1) == 12);
    CHECK(dims.at(0) == 5);
    const auto rc = count_regions_bruteforce(testing::two_unit_layer());
    CHECK(rc.regions == 8);
    // Quadrilateral (0,1), (1/3,2/3), (0,0), (-2/3,1) and triangle
    // (0,1), (1/3,2/3), (1,2), traced by hand along the six rays.
    CHECK(rc.bounded_regions == 2);
  }
  SUBCASE("witnesses realize their signatures exactly") {
    const auto layer = testing::two_unit_layer();
    for (const auto& c : enumerate_cells(layer)) CHECK(network::activation_pattern(layer, c.witness) == c.signature);
  }
  SUBCASE("three generic lines: 7 regions, one bounded") {
    const auto layer = network::construct_shallow_optimal(2, {2, 2, 2}, 3);
    const auto rc = count_regions_bruteforce(layer);
    CHECK(rc.regions == 7);
    CHECK(rc.bounded_regions == 1);
  }
  SUBCASE("central ranks (3,2)") {
    const auto rc = count_regions_bruteforce(central_3_2());
    CHECK(rc.regions == 5);
    CHECK(rc.bounded_regions == 0);
  }
}

TEST_CASE("serial and parallel enumeration agree") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto layer = network::sample_generic(2, {3, 2, 3}, BiasMode::with_bias, seed);
    const auto a = enumerate_cells(layer);
    const auto b = enumerate_cells_serial(layer);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].signature == b[i].signature);
      CHECK(a[i].dim == b[i].dim);
      CHECK(a[i].bounded == b[i].bounded);
      CHECK(a[i].witness == b[i].witness);
    }
    CHECK(count_regions_bruteforce(layer) == count_regions_bruteforce_serial(layer));
  }
}

TEST_CASE("Euler relation over all cells") {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const std::size_t n = 1 + seed % 3;
    const auto layer = network::sample_generic(n, {2, 3}, BiasMode::with_bias, seed);
    long long chi = 0;
    for (const auto& c : enumerate_cells(layer)) chi += c.dim % 2 == 0 ? 1 : -1;
    CHECK(chi == (n % 2 == 0 ? 1 : -1));
  }
  long long chi = 0;
  for (const auto& c : enumerate_cells(testing::two_unit_layer())) chi += c.dim % 2 == 0 ? 1 : -1;
  CHECK(chi == 1);
}

TEST_CASE("intersection poset of the two-unit layer") {
  const auto arr = build_atoms(testing::two_unit_layer());
  const auto poset = build_poset(arr);
  CHECK(poset.elements.size() == 12);
  std::map<long long, int> mu_points;
  for (const auto& e : poset.elements) {
    if (e.dim == 2) CHECK(poset.mu(e.id) == 1);
    if (e.dim == 1) CHECK(poset.mu(e.id) == -1);
    if (e.dim == 0) {
      ++mu_points[poset.mu(e.id)];
      // Triple points of one unit have support size 1, crossings 2.
      REQUIRE(e.support);
      CHECK(e.support->size() == (poset.mu(e.id) == 2 ? 1u : 2u));
    }
  }
  CHECK(mu_points[2] == 2);
  CHECK(mu_points[1] == 3);
  CHECK(count_regions_poset(poset) == 8);
  CHECK(count_faces_poset(poset, 1) == 12);
  CHECK(count_faces_poset(poset, 0) == 5);
  CHECK_THROWS_AS(count_faces_poset(poset, 2), PreconditionError);
  check_mobius_recursion(poset);
}

TEST_CASE("poset of generic lines and of central arrangements") {
  const auto lines = build_poset(build_atoms(network::construct_shallow_optimal(2, {2, 2, 2}, 5)));
  CHECK(lines.elements.size() == 7);
  for (const auto& e : lines.elements) {
    if (e.dim == 0) CHECK(lines.mu(e.id) == 1);
  }
  CHECK(count_faces_poset(lines, 0) == 3);
  CHECK(count_regions_poset(lines) == 7);

  const auto arr = build_atoms(central_3_2());
  CHECK(arr.central);
  const auto central = build_poset(arr);
  for (const auto& e : central.elements) {
    if (e.dim == 0) {
      CHECK(central.mu(e.id) == 3);
      CHECK_FALSE(e.support.has_value());
    }
  }
  CHECK(count_regions_poset(central) == 5);
  check_mobius_recursion(central);

  const LayerSpec empty{3, BiasMode::with_bias, {unit({{1, 2, 3}}, {1})}};
  CHECK(count_regions_poset(build_atoms(empty)) == 1);
}

TEST_CASE("poset and brute force agree on generic layers") {
  for (std::uint64_t seed = 100; seed < 112; ++seed) {
    const std::size_t n = 1 + seed % 3;
    const std::vector<std::size_t> ranks = seed % 2 ? std::vector<std::size_t>{3, 2, 3} : std::vector<std::size_t>{2, 3};
    const auto layer = network::sample_generic(n, ranks, BiasMode::with_bias, seed);
    const auto poset = build_poset(build_atoms(layer));
    check_mobius_recursion(poset);
    CHECK(count_regions_poset(poset) == static_cast<long long>(count_regions_bruteforce(layer).regions));
    std::map<int, int> dims;
    for (const auto& c : enumerate_cells(layer)) ++dims[c.dim];
    for (int s = 0; s < static_cast<int>(n); ++s) CHECK(count_faces_poset(poset, s) == dims[s]);
  }
}

TEST_CASE("simplicity certificate") {
  CHECK(is_simple(build_atoms(network::construct_shallow_optimal(3, {3, 2, 4}, 2))).simple);
  CHECK(is_simple(build_atoms(network::construct_shallow_optimal(2, {2, 2, 2, 2}, 9))).simple);

  // Two units sharing the atom {x = 0}.
  const LayerSpec shared{2, BiasMode::with_bias, {unit({{1, 0}, {0, 0}}, {0, 0}), unit({{2, 0}, {0, 0}}, {0, 0})}};
  const auto cert = is_simple(build_atoms(shared));
  CHECK_FALSE(cert.simple);
  CHECK(cert.violating_atoms.size() == 2);

  // Three lines through one point.
  const LayerSpec concurrent{2,
                             BiasMode::with_bias,
                             {unit({{1, 0}, {0, 0}}, {0, 0}), unit({{0, 1}, {0, 0}}, {0, 0}),
                              unit({{1, 1}, {0, 0}}, {0, 0})}};
  CHECK_FALSE(is_simple(build_atoms(concurrent)).simple);
}

TEST_CASE("subsum identities") {
  SUBCASE("three generic lines") {
    const auto r = subsum_identity_noncentral(network::construct_shallow_optimal(2, {2, 2, 2}, 1));
    CHECK(r.lhs == 7);
    CHECK(r.rhs == 7);
  }
  SUBCASE("optimal ranks (3,3,2)") {
    const auto r = subsum_identity_noncentral(network::construct_shallow_optimal(2, {3, 3, 2}, 1));
    CHECK(r.lhs == 14);
    CHECK(r.rhs == 14);
  }
  SUBCASE("m = n is rejected") {
    CHECK_THROWS_AS(subsum_identity_noncentral(network::construct_shallow_optimal(2, {3, 3}, 1)), PreconditionError);
    CHECK_THROWS_AS(subsum_identity_central(network::sample_generic(3, {3, 3}, BiasMode::no_bias, 1)),
                    PreconditionError);
  }
  SUBCASE("central (3,2) in Q^2") {
    const auto r = subsum_identity_central(central_3_2());
    CHECK(r.lhs == 5);
    CHECK(r.rhs == 5);
  }
  SUBCASE("central (3,3,2) in Q^3") {
    const auto layer = network::sample_generic(3, {3, 3, 2}, BiasMode::no_bias, 4);
    const auto r = subsum_identity_central(layer);
    CHECK(r.lhs == 15);
    CHECK(r.rhs == 15);
  }
  SUBCASE("random simple instances") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const auto nc = subsum_identity_noncentral(network::sample_generic(2, {3, 2, 3}, BiasMode::with_bias, seed));
      CHECK(nc.lhs == nc.rhs);
      const auto c = subsum_identity_central(network::sample_generic(2, {3, 2}, BiasMode::no_bias, seed));
      CHECK(c.lhs == c.rhs);
    }
  }
}

TEST_CASE("bounded-region gap") {
  const auto lifted = network::construct_shallow_optimal_nobias(2, {2, 2}, 1);
  const auto rep = bounded_region_gap(lifted, vec({0, 1}));
  CHECK(rep.r_A == 4);
  CHECK(rep.r_Ag == 3);
  CHECK(rep.gap == 1);
  CHECK(rep.floor == 1);

  const auto three = network::sample_generic(2, {2, 2, 2}, BiasMode::no_bias, 3);
  const auto r3 = bounded_region_gap(three, vec({1, 3}));
  CHECK(r3.floor == 2);
  CHECK(r3.gap >= 2);

  CHECK_THROWS_AS(bounded_region_gap(lifted, vec({0, 1}), 0), PreconditionError);
  CHECK_THROWS_AS(bounded_region_gap(network::sample_generic(3, {2, 2}, BiasMode::no_bias, 1), vec({0, 0, 1})),
                  PreconditionError);
}

TEST_CASE("restriction to a generic affine subspace") {
  // Layer on Q^3 restricted to a generic plane: the count matches the
  // optimal formula in dimension 2 for the optimal construction.
  const auto layer = network::construct_shallow_optimal(3, {3, 2, 2}, 4);
  const auto plane = restrict_to_affine(layer, vec({1, -2, 3}), {vec({1, 3, -1}), vec({2, -1, 5})});
  CHECK(count_regions_bruteforce(plane).regions == bounds::shallow_formula(2, {3, 2, 2}, BiasMode::with_bias));
  const auto line = restrict_to_affine(layer, vec({1, -2, 3}), {vec({1, 3, -1})});
  CHECK(count_regions_bruteforce(line).regions == bounds::shallow_formula(1, {3, 2, 2}, BiasMode::with_bias));
}

TEST_CASE("budgets") {
  Budget small;
  small.max_signatures = 10;
  CHECK_THROWS_AS(enumerate_cells(testing::two_unit_layer(), small), BudgetExceeded);
  Budget few_lps;
  few_lps.max_lp_calls = 2;
  try {
    enumerate_cells_serial(network::sample_generic(2, {3, 3, 3}, BiasMode::with_bias, 1), few_lps);
    FAIL("expected a budget error");
  } catch (const BudgetExceeded& e) {
    CHECK(e.flag() == "TROPIC_BUDGET_LP");
  }
}

TEST_CASE("deep region count") {
  const auto small = network::construct_deep_lower(1, {2, 1}, 2, 1);
  const auto n_small = count_regions_deep(small.network);
  CHECK(n_small >= 6);
  CHECK(n_small <= bounds::deep_upper(1, {2, 1}, 2, BiasMode::with_bias));

  const auto net = network::single_layer(testing::two_unit_layer());
  CHECK(count_regions_deep(net) == 8);
}
