#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "common/json_util.hpp"
#include "tropic/arrangement.hpp"
#include "tropic/network.hpp"

namespace tropic::cli {

using nlohmann::json;

struct Report {
  json results = json::object();
  json certificates = json::object();
  std::optional<std::uint64_t> seed;
  int exit_code = 0;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

json layer_json(const network::LayerSpec& layer);

/// Every identity and property suite, `trials` seeded instances each.
Report verify_identities(std::size_t trials, std::uint64_t seed, const arrangement::Budget& budget);

}  // namespace tropic::cli
