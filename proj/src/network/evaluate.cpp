#include "tropic/errors.hpp"
#include "tropic/network.hpp"

namespace tropic::network {

namespace {

void check_dim(std::size_t expected, const Vector& x) {
  if (x.size() != expected) {
    throw InputError("point has dimension " + std::to_string(x.size()) + ", expected " + std::to_string(expected));
  }
}

Vector preactivation_values(const MaxoutUnitSpec& unit, const Vector& x) {
  Vector out;
  out.reserve(unit.rank());
  for (std::size_t r = 0; r < unit.rank(); ++r) out.push_back(dot(unit.weights[r], x) + unit.bias(r));
  return out;
}

}  // namespace

Vector evaluate_layer(const LayerSpec& layer, const Vector& x) {
  check_dim(layer.input_dim, x);
  Vector out;
  out.reserve(layer.units.size());
  for (const auto& unit : layer.units) {
    const Vector values = preactivation_values(unit, x);
    Rational best = values.front();
    for (const auto& v : values) {
      if (v > best) best = v;
    }
    out.push_back(best);
  }
  return out;
}

Vector evaluate(const NetworkSpec& net, const Vector& x) {
  check_dim(net.input_dim, x);
  Vector current = x;
  for (const auto& layer : net.layers) current = evaluate_layer(layer, current);
  return current;
}

std::vector<std::vector<std::size_t>> activation_pattern(const LayerSpec& layer, const Vector& x) {
  check_dim(layer.input_dim, x);
  std::vector<std::vector<std::size_t>> out;
  for (const auto& unit : layer.units) {
    const Vector values = preactivation_values(unit, x);
    Rational best = values.front();
    for (const auto& v : values) {
      if (v > best) best = v;
    }
    std::vector<std::size_t> ties;
    for (std::size_t r = 0; r < values.size(); ++r) {
      if (values[r] == best) ties.push_back(r);
    }
    out.push_back(std::move(ties));
  }
  return out;
}

ActivationPattern activation_pattern(const NetworkSpec& net, const Vector& x) {
  check_dim(net.input_dim, x);
  ActivationPattern out;
  Vector current = x;
  for (const auto& layer : net.layers) {
    out.push_back(activation_pattern(layer, current));
    current = evaluate_layer(layer, current);
  }
  return out;
}

}  // namespace tropic::network
