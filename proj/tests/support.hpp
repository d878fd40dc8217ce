#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "tropic/network.hpp"

namespace tropic::testing {

inline std::string data_path(const std::string& name) { return std::string(TROPIC_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Vector vec(std::initializer_list<long> xs) {
  Vector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

/// Units max{2y, x+y+1, 2} and max{0, 3x+2y, 5x+y}.
inline network::LayerSpec two_unit_layer() {
  return network::parse_network(slurp(data_path("two_unit_layer.json"))).layers.front();
}

inline network::MaxoutUnitSpec unit(std::initializer_list<std::initializer_list<long>> weights,
                                    std::initializer_list<long> biases) {
  network::MaxoutUnitSpec u;
  for (auto w : weights) u.weights.push_back(vec(w));
  if (biases.size()) u.biases = vec(biases);
  return u;
}

inline network::LayerSpec relu_layer() {
  return {1, network::BiasMode::with_bias, {unit({{1}, {0}}, {0, 0})}};
}

}  // namespace tropic::testing
