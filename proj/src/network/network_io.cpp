#include "../common/json_util.hpp"
#include "tropic/errors.hpp"
#include "tropic/network.hpp"

namespace tropic::network {

using nlohmann::json;
using jsonutil::encode;
using jsonutil::fail;
using jsonutil::field;
using jsonutil::positive_int;
using jsonutil::vector_of;

void LayerSpec::validate() const {
  if (input_dim == 0) throw InputError("layer input_dim must be positive");
  if (units.empty()) throw InputError("layer has no units");
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& unit = units[u];
    const std::string where = "unit " + std::to_string(u);
    if (unit.rank() == 0) throw InputError(where + ": rank must be at least 1");
    for (const auto& w : unit.weights) {
      if (w.size() != input_dim) throw InputError(where + ": weight length differs from input_dim");
    }
    if (bias_mode == BiasMode::with_bias) {
      if (!unit.biases) throw InputError(where + ": missing biases in a bias layer");
      if (unit.biases->size() != unit.rank()) throw InputError(where + ": bias count differs from rank");
    } else if (unit.biases) {
      throw InputError(where + ": biases given in a no_bias layer");
    }
  }
}

std::vector<std::size_t> LayerSpec::ranks() const {
  std::vector<std::size_t> out;
  for (const auto& u : units) out.push_back(u.rank());
  return out;
}

LayerSpec LayerSpec::restrict_units(const std::vector<std::size_t>& subset) const {
  LayerSpec out{input_dim, bias_mode, {}};
  for (std::size_t i : subset) out.units.push_back(units.at(i));
  return out;
}

void NetworkSpec::validate() const {
  if (input_dim == 0) throw InputError("input_dim must be positive");
  if (layers.empty()) throw InputError("network has no layers");
  std::size_t dim = input_dim;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].input_dim != dim) {
      throw InputError("layer " + std::to_string(l) + " expects " + std::to_string(layers[l].input_dim) +
                       " inputs but receives " + std::to_string(dim));
    }
    layers[l].validate();
    dim = layers[l].units.size();
  }
}

NetworkSpec single_layer(const LayerSpec& layer) {
  NetworkSpec net;
  net.input_dim = layer.input_dim;
  net.layers.push_back(layer);
  return net;
}

NetworkSpec parse_network(const std::string& json_text) {
  const json doc = jsonutil::parse_document(json_text);
  NetworkSpec net;
  net.input_dim = positive_int(field(doc, "input_dim", "$"), "$.input_dim");
  const json& layers = field(doc, "layers", "$");
  if (!layers.is_array() || layers.empty()) fail("$.layers", "expected a nonempty array");

  std::size_t dim = net.input_dim;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string lp = "$.layers[" + std::to_string(l) + "]";
    LayerSpec layer;
    layer.input_dim = dim;
    const json& mode = field(layers[l], "bias_mode", lp);
    if (mode == "bias") {
      layer.bias_mode = BiasMode::with_bias;
    } else if (mode == "no_bias") {
      layer.bias_mode = BiasMode::no_bias;
    } else {
      fail(lp + ".bias_mode", "expected \"bias\" or \"no_bias\"");
    }
    const json& units = field(layers[l], "units", lp);
    if (!units.is_array() || units.empty()) fail(lp + ".units", "expected a nonempty array");
    for (std::size_t u = 0; u < units.size(); ++u) {
      const std::string up = lp + ".units[" + std::to_string(u) + "]";
      MaxoutUnitSpec unit;
      const json& weights = field(units[u], "weights", up);
      if (!weights.is_array() || weights.empty()) fail(up + ".weights", "rank must be at least 1");
      for (std::size_t r = 0; r < weights.size(); ++r) {
        const std::string wp = up + ".weights[" + std::to_string(r) + "]";
        Vector w = vector_of(weights[r], wp);
        if (w.size() != dim) {
          fail(wp, "has length " + std::to_string(w.size()) + " but the layer has " + std::to_string(dim) + " inputs");
        }
        unit.weights.push_back(std::move(w));
      }
      const auto it = units[u].find("biases");
      if (it != units[u].end()) {
        if (layer.bias_mode == BiasMode::no_bias) fail(up + ".biases", "not allowed in a no_bias layer");
        Vector b = vector_of(*it, up + ".biases");
        if (b.size() != unit.rank()) fail(up + ".biases", "length differs from the number of weight vectors");
        unit.biases = std::move(b);
      } else if (layer.bias_mode == BiasMode::with_bias) {
        fail(up, "missing \"biases\" in a bias layer");
      }
      layer.units.push_back(std::move(unit));
    }
    dim = layer.units.size();
    net.layers.push_back(std::move(layer));
  }
  return net;
}

std::string serialize_network(const NetworkSpec& net) {
  json doc;
  doc["input_dim"] = net.input_dim;
  json layers = json::array();
  for (const auto& layer : net.layers) {
    json jl;
    jl["bias_mode"] = layer.bias_mode == BiasMode::with_bias ? "bias" : "no_bias";
    json units = json::array();
    for (const auto& unit : layer.units) {
      json ju;
      json weights = json::array();
      for (const auto& w : unit.weights) weights.push_back(encode(w));
      ju["weights"] = std::move(weights);
      if (unit.biases) ju["biases"] = encode(*unit.biases);
      units.push_back(std::move(ju));
    }
    jl["units"] = std::move(units);
    layers.push_back(std::move(jl));
  }
  doc["layers"] = std::move(layers);
  return doc.dump(2);
}

std::vector<Vector> parse_points(const std::string& json_text) {
  const json doc = jsonutil::parse_document(json_text);
  const json& pts = field(doc, "points", "$");
  if (!pts.is_array()) fail("$.points", "expected an array");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < pts.size(); ++i) out.push_back(vector_of(pts[i], "$.points[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace tropic::network
