#include <doctest.h>

#include <random>

#include "tropic/bounds.hpp"
#include "tropic/errors.hpp"

using namespace tropic;
using namespace tropic::bounds;

namespace {

constexpr auto bias = BiasMode::with_bias;
constexpr auto nobias = BiasMode::no_bias;

// Direct subset enumeration: sum over |S| <= n of prod_{i in S} (k_i - 1).
Integer subset_sum(const std::vector<std::size_t>& ranks, std::size_t n, bool minus_one) {
  Integer total = 0;
  const std::size_t m = ranks.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) > n) continue;
    Integer p = 1;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1) p *= static_cast<unsigned long>(ranks[i] - (minus_one ? 1 : 0));
    }
    total += p;
  }
  return total;
}

}  // namespace

TEST_CASE("shallow formula examples") {
  CHECK(shallow_formula(2, {2, 2, 2}, bias) == 7);
  CHECK(shallow_formula(3, {3, 4}, bias) == 12);
  CHECK(shallow_formula(2, {2, 2, 2}, nobias) == 6);
  CHECK(shallow_formula(2, {3, 3}, bias) == 9);
  CHECK(shallow_formula(2, {3, 3}, nobias) == 6);
  CHECK(shallow_formula(3, {3, 3, 2}, nobias) == 15);
  CHECK(shallow_formula(2, {1, 1}, nobias) == 1);
  CHECK(shallow_formula(1, {5}, bias) == 5);
}

TEST_CASE("shallow formula against subset enumeration") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> m_d(1, 8), n_d(1, 5), k_d(1, 6);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::size_t> ranks(m_d(rng));
    for (auto& k : ranks) k = k_d(rng);
    const std::size_t n = n_d(rng);
    CHECK(shallow_formula(n, ranks, bias) == subset_sum(ranks, n, true));
  }
}

TEST_CASE("hyperplane special case") {
  for (std::size_t m = 1; m <= 20; ++m) {
    for (std::size_t n = 1; n <= 8; ++n) {
      const std::vector<std::size_t> ranks(m, 2);
      Integer with = 0, without = 0;
      for (std::size_t j = 0; j <= n; ++j) with += binomial(static_cast<long long>(m), static_cast<long long>(j));
      for (std::size_t j = 0; j + 1 <= n; ++j) {
        without += 2 * binomial(static_cast<long long>(m) - 1, static_cast<long long>(j));
      }
      CHECK(shallow_formula(n, ranks, bias) == with);
      CHECK(shallow_formula(n, ranks, nobias) == without);
    }
  }
}

TEST_CASE("few units reach the trivial bound") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> k_d(1, 7);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t m = 1; m <= n; ++m) {
      std::vector<std::size_t> ranks(m);
      for (auto& k : ranks) k = k_d(rng);
      CHECK(shallow_formula(n, ranks, bias) == trivial_bound(ranks));
    }
  }
  CHECK(trivial_bound({3, 3}) == 9);
  CHECK(trivial_bound({2, 2, 2, 2}) == 16);
  CHECK(trivial_bound({}) == 1);
}

TEST_CASE("shallow formula is monotone") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> m_d(1, 6), n_d(1, 5), k_d(1, 5);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::size_t> ranks(m_d(rng));
    for (auto& k : ranks) k = k_d(rng);
    const std::size_t n = n_d(rng);
    for (auto mode : {bias, nobias}) {
      CHECK(shallow_formula(n + 1, ranks, mode) >= shallow_formula(n, ranks, mode));
      auto bigger = ranks;
      bigger[i % bigger.size()] += 1;
      CHECK(shallow_formula(n, bigger, mode) >= shallow_formula(n, ranks, mode));
    }
  }
}

TEST_CASE("deep bounds") {
  CHECK(deep_upper(2, {2, 2}, 3, bias) == 81);
  CHECK(deep_upper(1, {3}, 2, bias) == 4);
  CHECK(deep_upper(2, {3}, 3, nobias) == 9);
  const auto low = deep_lower(2, {2, 2}, 3, bias);
  CHECK(low.value == 25);
  CHECK(low.n == 1);
  const auto small = deep_lower(1, {2, 1}, 2, bias);
  CHECK(small.value == 6);
  CHECK(small.n == 1);
  CHECK_THROWS_AS(deep_lower(2, {3, 2}, 2, bias), PreconditionError);
  CHECK_THROWS_AS(deep_lower(4, {4, 2}, 2, bias, 3), PreconditionError);
  CHECK(deep_lower(4, {8, 3}, 2, bias, 2).n == 2);
}

TEST_CASE("deep lower never exceeds deep upper") {
  for (std::size_t n0 = 1; n0 <= 4; ++n0) {
    for (std::size_t w1 = 1; w1 <= 8; ++w1) {
      for (std::size_t w2 = 1; w2 <= 5; ++w2) {
        for (std::size_t k = 2; k <= 4; ++k) {
          for (auto mode : {bias, nobias}) {
            if (admissible_folds(n0, {w1, w2}, mode).empty()) continue;
            CHECK(deep_lower(n0, {w1, w2}, k, mode).value <= deep_upper(n0, {w1, w2}, k, mode));
          }
        }
      }
    }
  }
}

TEST_CASE("inclusion-exclusion identity on the full grid") {
  for (long long m = 1; m <= 12; ++m) {
    for (long long n = 0; n < m; ++n) {
      for (long long r = 0; r <= n; ++r) CHECK(identity_inclusion_exclusion(m, n, r) == 1);
    }
  }
  CHECK_THROWS_AS(identity_inclusion_exclusion(3, 3, 0), PreconditionError);
}

TEST_CASE("reformulation identity") {
  const auto s = identity_reformulation(3, 2, {3, 3, 3});
  CHECK(s.lhs == 19);
  CHECK(s.rhs == 19);
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> m_d(1, 10), k_d(2, 6);
  for (int i = 0; i < 500; ++i) {
    const std::size_t m = m_d(rng);
    std::uniform_int_distribution<std::size_t> n_d(0, m - 1);
    const std::size_t n = n_d(rng);
    std::vector<std::size_t> ranks(m);
    for (auto& k : ranks) k = k_d(rng);
    const auto sides = identity_reformulation(m, n, ranks);
    CHECK(sides.lhs == sides.rhs);
    CHECK(sides.rhs == subset_sum(ranks, n, true));
  }
  CHECK_THROWS_AS(identity_reformulation(2, 2, {3, 3}), PreconditionError);
}

TEST_CASE("prior-work bounds") {
  const auto p = prior_bounds(2, 3, 3);
  CHECK(p.lower == 9);
  CHECK(p.upper == 46);
  const auto relu = prior_bounds(2, 5, 2);
  CHECK(relu.upper == 1 + 5 + 10);
  CHECK(prior_bounds(4, 3, 3).lower == trivial_bound({3, 3, 3}));
}

TEST_CASE("big values stay exact") {
  const std::vector<std::size_t> ranks(60, 50);
  CHECK(shallow_formula(60, ranks, bias) == trivial_bound(ranks));
  Integer expected;
  mpz_ui_pow_ui(expected.get_mpz_t(), 50, 60);
  CHECK(trivial_bound(ranks) == expected);
}
