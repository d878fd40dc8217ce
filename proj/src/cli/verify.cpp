#include <random>

#include "cli/commands.hpp"
#include "tropic/bounds.hpp"
#include "tropic/minkowski.hpp"

namespace tropic::cli {

namespace {

using network::BiasMode;

class Suite {
 public:
  explicit Suite(std::string name) : name_(std::move(name)) {}

  void record(bool ok, const std::function<json()>& instance) {
    ++trials_;
    if (ok) {
      ++passed_;
    } else {
      counterexamples_.push_back(instance());
    }
  }

  bool failed() const { return !counterexamples_.empty(); }

  json to_json() const {
    return {{"name", name_},
            {"trials", trials_},
            {"passed", passed_},
            {"failed", trials_ - passed_},
            {"counterexamples", counterexamples_}};
  }

 private:
  std::string name_;
  std::size_t trials_ = 0;
  std::size_t passed_ = 0;
  json counterexamples_ = json::array();
};

// One generator per (suite, trial) so suites can be rerun independently.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t suite, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(suite), static_cast<std::uint32_t>(trial)};
  return std::mt19937_64(seq);
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<std::size_t> pick_ranks(std::mt19937_64& rng, std::size_t m, std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> ranks(m);
  for (auto& k : ranks) k = pick(rng, lo, hi);
  return ranks;
}

json ranks_json(const std::vector<std::size_t>& ranks) { return json(ranks); }

json sets_json(const std::vector<minkowski::LabeledPointSet>& sets) {
  json arr = json::array();
  for (const auto& s : sets) arr.push_back(json::parse(minkowski::serialize_point_set(s)));
  return arr;
}

}  // namespace

Report verify_identities(std::size_t trials, std::uint64_t seed, const arrangement::Budget& budget) {
  std::vector<Suite> suites;

  {
    Suite s("inclusion_exclusion");
    for (long long m = 1; m <= 12; ++m) {
      for (long long n = 0; n < m; ++n) {
        for (long long r = 0; r <= n; ++r) {
          const auto v = bounds::identity_inclusion_exclusion(m, n, r);
          s.record(v == 1, [&] { return json{{"m", m}, {"n", n}, {"r", r}, {"value", jsonutil::encode(v)}}; });
        }
      }
    }
    suites.push_back(std::move(s));
  }

  {
    Suite s("reformulation");
    for (std::size_t t = 0; t < trials; ++t) {
      auto rng = trial_rng(seed, 1, t);
      const std::size_t m = pick(rng, 1, 10);
      const std::size_t n = pick(rng, 0, m - 1);
      const auto ranks = pick_ranks(rng, m, 2, 6);
      const auto sides = bounds::identity_reformulation(m, n, ranks);
      s.record(sides.lhs == sides.rhs, [&] {
        return json{{"m", m}, {"n", n}, {"ranks", ranks_json(ranks)}, {"lhs", jsonutil::encode(sides.lhs)},
                    {"rhs", jsonutil::encode(sides.rhs)}};
      });
    }
    suites.push_back(std::move(s));
  }

  {
    Suite s("subsum_noncentral");
    for (std::size_t t = 0; t < trials; ++t) {
      auto rng = trial_rng(seed, 2, t);
      const std::size_t n = pick(rng, 1, 2);
      const auto ranks = pick_ranks(rng, pick(rng, n + 1, 4), 2, 3);
      const auto layer = network::sample_generic(n, ranks, BiasMode::with_bias, rng());
      const auto c = arrangement::subsum_identity_noncentral(layer, budget);
      s.record(c.lhs == c.rhs, [&] { return json{{"network", layer_json(layer)}, {"lhs", c.lhs}, {"rhs", c.rhs}}; });
    }
    suites.push_back(std::move(s));
  }

  {
    Suite s("subsum_central");
    for (std::size_t t = 0; t < trials; ++t) {
      auto rng = trial_rng(seed, 3, t);
      const std::size_t n = pick(rng, 1, 2);
      const auto ranks = pick_ranks(rng, pick(rng, n + 1, 4), 2, 3);
      const auto layer = network::sample_generic(n + 1, ranks, BiasMode::no_bias, rng());
      const auto c = arrangement::subsum_identity_central(layer, budget);
      s.record(c.lhs == c.rhs, [&] { return json{{"network", layer_json(layer)}, {"lhs", c.lhs}, {"rhs", c.rhs}}; });
    }
    suites.push_back(std::move(s));
  }

  {
    Suite s("upper_vertex_identity");
    for (std::size_t t = 0; t < trials; ++t) {
      auto rng = trial_rng(seed, 4, t);
      const std::size_t n = pick(rng, 1, 2);
      const std::size_t m = pick(rng, n + 1, n + 3);
      const auto family = minkowski::sample_general_family(n, m, 4, rng());
      const auto c = minkowski::weibel_upper_identity(family.sets);
      s.record(c.lhs == c.rhs,
               [&] { return json{{"point_sets", sets_json(family.sets)}, {"lhs", c.lhs}, {"rhs", c.rhs}}; });
    }
    suites.push_back(std::move(s));
  }

  {
    Suite s("bounded_region_floor");
    for (std::size_t t = 0; t < trials; ++t) {
      auto rng = trial_rng(seed, 5, t);
      const std::size_t n = pick(rng, 1, 2);
      const std::size_t m = pick(rng, 1, 4);
      const auto ranks = pick_ranks(rng, m, 2, 3);
      const bool central = pick(rng, 0, 3) == 0 && n >= 2;
      const auto layer = network::sample_generic(n, ranks, central ? BiasMode::no_bias : BiasMode::with_bias, rng());
      const auto count = arrangement::count_regions_bruteforce(layer, budget);
      const Integer floor = central ? Integer(0) : bounds::binomial(static_cast<long long>(m) - 1, static_cast<long long>(n));
      const bool ok = central ? count.bounded_regions == 0 : Integer(static_cast<unsigned long>(count.bounded_regions)) >= floor;
      s.record(ok, [&] {
        return json{{"network", layer_json(layer)}, {"bounded_regions", count.bounded_regions},
                    {"floor", jsonutil::encode(floor)}};
      });
    }
    suites.push_back(std::move(s));
  }

  {
    Suite s("gap");
    for (std::size_t t = 0; t < trials; ++t) {
      auto rng = trial_rng(seed, 6, t);
      const std::size_t n = pick(rng, 1, 2);
      const auto ranks = pick_ranks(rng, pick(rng, n + 1, 4), 2, 3);
      const auto layer = network::sample_generic(n + 1, ranks, BiasMode::no_bias, rng());
      std::uniform_int_distribution<int> coord(-7, 7);
      Vector w(n + 1);
      while (is_zero(w)) {
        for (auto& x : w) x = coord(rng);
      }
      const auto g = arrangement::bounded_region_gap(layer, w, 1, budget);
      s.record(g.gap >= g.floor, [&] {
        return json{{"network", layer_json(layer)}, {"normal", jsonutil::encode(w)}, {"offset", 1},
                    {"r_A", g.r_A}, {"r_Ag", g.r_Ag}, {"floor", g.floor}};
      });
    }
    suites.push_back(std::move(s));
  }

  {
    Suite s("duality");
    for (std::size_t t = 0; t < trials; ++t) {
      auto rng = trial_rng(seed, 7, t);
      const bool bias = pick(rng, 0, 1) == 0;
      const std::size_t n = pick(rng, bias ? 1 : 2, 3);
      const auto ranks = pick_ranks(rng, pick(rng, 1, 3), 2, 3);
      const auto layer = network::sample_generic(n, ranks, bias ? BiasMode::with_bias : BiasMode::no_bias, rng());
      const auto d = minkowski::duality_check(layer, budget);
      s.record(d.region_count == d.vertex_count, [&] {
        return json{{"network", layer_json(layer)}, {"regions", d.region_count}, {"vertices", d.vertex_count}};
      });
    }
    suites.push_back(std::move(s));
  }

  Report rep;
  rep.seed = seed;
  json list = json::array();
  bool all = true;
  for (const auto& s : suites) {
    list.push_back(s.to_json());
    all = all && !s.failed();
  }
  rep.results["suites"] = list;
  rep.results["all_passed"] = all;
  rep.certificates["instances_certified_simple"] = true;
  rep.exit_code = all ? 0 : 5;
  return rep;
}

}  // namespace tropic::cli
