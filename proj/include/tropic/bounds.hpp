#pragma once

#include <optional>
#include <vector>

#include "tropic/network.hpp"
#include "tropic/rational.hpp"

namespace tropic::bounds {

using network::BiasMode;

/// C(n, k), zero outside 0 <= k <= n.
Integer binomial(long long n, long long k);

/// e_0..e_upto of the given values (one-pass recurrence).
std::vector<Integer> elementary_symmetric(const std::vector<Integer>& values, std::size_t upto);

/// Maximum number of regions of a layer with n inputs and the given
/// ranks. With biases: sum_{j<=n} e_j(k_i - 1). Without: C(m'-1, n-1) +
/// sum_{j<=n-1} e_j(k_i - 1), m' the number of ranks above 1 (1 when m' = 0).
Integer shallow_formula(std::size_t n, const std::vector<std::size_t>& ranks, BiasMode mode);

/// prod k_i.
Integer trivial_bound(const std::vector<std::size_t>& ranks);

/// Product over layers of shallow_formula(e_l, ranks of layer l), with
/// e_l = min(n_0, ..., n_{l-1}).
Integer deep_upper(std::size_t n0, const std::vector<std::vector<std::size_t>>& layer_ranks, BiasMode mode);
Integer deep_upper(std::size_t n0, const std::vector<std::size_t>& widths, std::size_t rank, BiasMode mode);

/// Fold dimensions n for which every hidden layer splits evenly: with
/// biases n <= n0 and n_l / n an even integer; without biases n >= 2,
/// n <= n0 and (n_l - 1) / (n - 1) an even integer.
std::vector<std::size_t> admissible_folds(std::size_t n0, const std::vector<std::size_t>& widths, BiasMode mode);

struct DeepLower {
  Integer value;
  std::size_t n = 0;
};

/// Zig-zag lower bound for uniform rank k. Without `fold`, the admissible n
/// maximizing the value is used. Throws PreconditionError when no n (or the
/// requested one) is admissible.
DeepLower deep_lower(std::size_t n0, const std::vector<std::size_t>& widths, std::size_t rank, BiasMode mode,
                     std::optional<std::size_t> fold = std::nullopt);

/// sum_{j=0}^{n} (-1)^(n-j) C(m-1-j, n-j) C(m-r, j-r); 1 whenever 0 <= r <= n < m.
Integer identity_inclusion_exclusion(long long m, long long n, long long r);

struct Sides {
  Integer lhs;
  Integer rhs;
};

/// lhs = sum_j (-1)^(n-j) C(m-1-j, n-j) e_j(k), rhs = sum_{j<=n} e_j(k - 1).
Sides identity_reformulation(std::size_t m, std::size_t n, const std::vector<std::size_t>& ranks);

struct PriorBounds {
  Integer lower;
  Integer upper;
};

/// k^min(n, m) and sum_{j<=n} C(m k (k-1) / 2, j).
PriorBounds prior_bounds(std::size_t n, std::size_t m, std::size_t k);

}  // namespace tropic::bounds
