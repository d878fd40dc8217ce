#include <random>

#include "tropic/arrangement.hpp"
#include "tropic/errors.hpp"
#include "tropic/network.hpp"

namespace tropic::network {

namespace {

bool acceptable(const LayerSpec& layer) {
  const auto arr = arrangement::build_atoms(layer);
  std::vector<char> seen(layer.units.size(), 0);
  for (const auto& a : arr.atoms) seen[a.unit] = 1;
  for (std::size_t u = 0; u < layer.units.size(); ++u) {
    if (layer.units[u].rank() >= 2 && !seen[u]) return false;
  }
  if (!arrangement::is_simple(arr).simple) return false;
  if (layer.bias_mode == BiasMode::no_bias) return true;
  // Generic at infinity: the linear parts alone form a simple central
  // arrangement (rules out parallel atoms of different units).
  LayerSpec linear{layer.input_dim, BiasMode::no_bias, {}};
  for (const auto& u : layer.units) linear.units.push_back({u.weights, std::nullopt});
  return arrangement::is_simple(arrangement::build_atoms(linear)).simple;
}

}  // namespace

LayerSpec sample_generic(std::size_t n, const std::vector<std::size_t>& ranks, BiasMode mode, std::uint64_t seed,
                         const SampleOptions& options) {
  if (n == 0) throw PreconditionError("input dimension must be positive");
  if (ranks.empty()) throw PreconditionError("at least one unit is required");
  for (std::size_t k : ranks) {
    if (k == 0) throw InputError("ranks must be at least 1");
  }
  if (options.bound < 1) throw InputError("sampling bound must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> draw(-options.bound, options.bound);
  auto scalar = [&] { return Rational(static_cast<long>(draw(rng))); };
  for (std::size_t attempt = 0; attempt < options.max_tries; ++attempt) {
    LayerSpec layer{n, mode, {}};
    for (std::size_t k : ranks) {
      MaxoutUnitSpec unit;
      for (std::size_t r = 0; r < k; ++r) {
        Vector w(n);
        for (auto& x : w) x = scalar();
        unit.weights.push_back(std::move(w));
      }
      if (mode == BiasMode::with_bias) {
        unit.biases.emplace();
        for (std::size_t r = 0; r < k; ++r) unit.biases->push_back(scalar());
      }
      layer.units.push_back(std::move(unit));
    }
    if (acceptable(layer)) return layer;
  }
  throw PreconditionError("no simple sample within " + std::to_string(options.max_tries) +
                          " tries; use a larger grid bound");
}

}  // namespace tropic::network
