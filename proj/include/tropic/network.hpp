#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tropic/rational.hpp"

namespace tropic::network {

enum class BiasMode { with_bias, no_bias };

/// x -> max_r (weights[r] . x + biases[r]). No biases means a linear unit.
struct MaxoutUnitSpec {
  std::vector<Vector> weights;
  std::optional<Vector> biases;

  std::size_t rank() const { return weights.size(); }
  /// Bias of preactivation r (0 for a bias-free unit).
  Rational bias(std::size_t r) const { return biases ? (*biases)[r] : Rational(0); }

  bool operator==(const MaxoutUnitSpec&) const = default;
};

struct LayerSpec {
  std::size_t input_dim = 0;
  BiasMode bias_mode = BiasMode::with_bias;
  std::vector<MaxoutUnitSpec> units;

  /// Checks rank >= 1, weight lengths, and bias presence against bias_mode.
  void validate() const;
  std::vector<std::size_t> ranks() const;
  /// Layer consisting of the units listed in `subset` (in that order).
  LayerSpec restrict_units(const std::vector<std::size_t>& subset) const;

  bool operator==(const LayerSpec&) const = default;
};

struct NetworkSpec {
  std::size_t input_dim = 0;
  std::vector<LayerSpec> layers;

  void validate() const;
  std::size_t output_dim() const { return layers.empty() ? input_dim : layers.back().units.size(); }

  bool operator==(const NetworkSpec&) const = default;
};

/// Per layer, per unit: every preactivation index (0-based) attaining the max.
using ActivationPattern = std::vector<std::vector<std::vector<std::size_t>>>;

// JSON I/O. Scalars are decimal integers or "p/q" strings; floats are
// rejected. Errors carry the JSON path of the offending element.
NetworkSpec parse_network(const std::string& json_text);
std::string serialize_network(const NetworkSpec& net);
std::vector<Vector> parse_points(const std::string& json_text);

NetworkSpec single_layer(const LayerSpec& layer);

Vector evaluate_layer(const LayerSpec& layer, const Vector& x);
Vector evaluate(const NetworkSpec& net, const Vector& x);

/// Tie sets per unit (0-based indices); ties are never broken.
std::vector<std::vector<std::size_t>> activation_pattern(const LayerSpec& layer, const Vector& x);
ActivationPattern activation_pattern(const NetworkSpec& net, const Vector& x);

/// Layer whose nonlinear locus is, per unit, k_i - 1 parallel hyperplanes
/// with moment-curve normals (1, t_i, ..., t_i^(n-1)). Certified simple
/// before returning; `seed` picks the t_i and, if needed, shift
/// perturbations. Throws PreconditionError for a rank below 2.
LayerSpec construct_shallow_optimal(std::size_t n, const std::vector<std::size_t>& ranks, std::uint64_t seed);

/// Bias-free layer on Q^n: the (n-1)-input optimal layer homogenized into
/// the last coordinate. For n = 1 the units are max_r (r x).
LayerSpec construct_shallow_optimal_nobias(std::size_t n, const std::vector<std::size_t>& ranks,
                                           std::uint64_t seed);

struct DeepConstruction {
  NetworkSpec network;
  std::size_t folded_dim = 0;  // the n of the lower bound
};

/// Folding (zig-zag) construction for the deep lower bound, with biases.
/// Throws PreconditionError when no n admits even groups n_l / n.
DeepConstruction construct_deep_lower(std::size_t n0, const std::vector<std::size_t>& widths, std::size_t rank,
                                      std::uint64_t seed);

struct SampleOptions {
  std::int64_t bound = 8;     // numerators uniform in [-bound, bound]
  std::size_t max_tries = 200;
};

/// Seeded integer-grid layer, resampled until the arrangement is simple
/// and every unit of rank >= 2 has at least one atom. Bias layers must in
/// addition be simple at infinity: their weights alone, read as a
/// bias-free layer, give a simple central arrangement.
LayerSpec sample_generic(std::size_t n, const std::vector<std::size_t>& ranks, BiasMode mode, std::uint64_t seed,
                         const SampleOptions& options = {});

}  // namespace tropic::network
