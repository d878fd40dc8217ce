#include "tropic/bounds.hpp"

#include <algorithm>
#include <string>

#include "tropic/errors.hpp"

namespace tropic::bounds {

namespace {

Integer power(const Integer& base, std::size_t exp) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

std::vector<Integer> minus_one(const std::vector<std::size_t>& ranks) {
  std::vector<Integer> out;
  out.reserve(ranks.size());
  for (std::size_t k : ranks) {
    if (k == 0) throw InputError("ranks must be at least 1");
    out.emplace_back(static_cast<unsigned long>(k - 1));
  }
  return out;
}

Integer sum_upto(const std::vector<Integer>& e, std::size_t upto) {
  Integer s = 0;
  for (std::size_t j = 0; j <= upto && j < e.size(); ++j) s += e[j];
  return s;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

Integer binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

std::vector<Integer> elementary_symmetric(const std::vector<Integer>& values, std::size_t upto) {
  std::vector<Integer> e(upto + 1, Integer(0));
  e[0] = 1;
  for (const auto& v : values) {
    for (std::size_t j = upto; j >= 1; --j) e[j] += e[j - 1] * v;
  }
  return e;
}

Integer shallow_formula(std::size_t n, const std::vector<std::size_t>& ranks, BiasMode mode) {
  if (n == 0) throw InputError("input dimension must be positive");
  const auto e = elementary_symmetric(minus_one(ranks), n);
  if (mode == BiasMode::with_bias) return sum_upto(e, n);
  const auto m_prime = std::count_if(ranks.begin(), ranks.end(), [](std::size_t k) { return k > 1; });
  if (m_prime == 0) return 1;
  return binomial(m_prime - 1, static_cast<long long>(n) - 1) + sum_upto(e, n - 1);
}

Integer trivial_bound(const std::vector<std::size_t>& ranks) {
  Integer p = 1;
  for (std::size_t k : ranks) p *= static_cast<unsigned long>(k);
  return p;
}

Integer deep_upper(std::size_t n0, const std::vector<std::vector<std::size_t>>& layer_ranks, BiasMode mode) {
  if (n0 == 0) throw InputError("input dimension must be positive");
  if (layer_ranks.empty()) throw InputError("network needs at least one layer");
  Integer product = 1;
  std::size_t e = n0;
  for (const auto& ranks : layer_ranks) {
    if (ranks.empty()) throw InputError("layer widths must be positive");
    product *= shallow_formula(e, ranks, mode);
    e = std::min(e, ranks.size());
  }
  return product;
}

Integer deep_upper(std::size_t n0, const std::vector<std::size_t>& widths, std::size_t rank, BiasMode mode) {
  std::vector<std::vector<std::size_t>> ranks;
  for (std::size_t w : widths) ranks.emplace_back(w, rank);
  return deep_upper(n0, ranks, mode);
}

std::vector<std::size_t> admissible_folds(std::size_t n0, const std::vector<std::size_t>& widths, BiasMode mode) {
  std::vector<std::size_t> out;
  const bool bias = mode == BiasMode::with_bias;
  for (std::size_t n = bias ? 1 : 2; n <= n0; ++n) {
    const std::size_t unit = bias ? n : n - 1;
    bool ok = true;
    for (std::size_t l = 0; l + 1 < widths.size() && ok; ++l) {
      const std::size_t w = bias ? widths[l] : widths[l] - std::min<std::size_t>(widths[l], 1);
      ok = w >= unit && w % unit == 0 && (w / unit) % 2 == 0;
    }
    if (ok) out.push_back(n);
  }
  return out;
}

DeepLower deep_lower(std::size_t n0, const std::vector<std::size_t>& widths, std::size_t rank, BiasMode mode,
                     std::optional<std::size_t> fold) {
  if (n0 == 0) throw InputError("input dimension must be positive");
  if (widths.empty()) throw InputError("network needs at least one layer");
  if (rank == 0) throw InputError("rank must be at least 1");
  for (std::size_t w : widths) {
    if (w == 0) throw InputError("layer widths must be positive");
  }
  const bool bias = mode == BiasMode::with_bias;
  auto candidates = admissible_folds(n0, widths, mode);
  if (fold) {
    if (std::find(candidates.begin(), candidates.end(), *fold) == candidates.end()) {
      throw PreconditionError("fold dimension " + std::to_string(*fold) + " is not admissible for widths (" +
                              join(widths) + ")");
    }
    candidates = {*fold};
  }
  if (candidates.empty()) {
    // Name the largest even multiple of the smallest fold that each hidden
    // layer could keep after discarding units.
    std::vector<std::size_t> usable;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
      const std::size_t w = bias ? widths[l] : widths[l] - 1;
      usable.push_back(w - w % 2 + (bias ? 0 : 1));
    }
    throw PreconditionError("no admissible fold dimension for widths (" + join(widths) +
                            "); each hidden layer needs an even group size, e.g. widths (" + join(usable) +
                            ") with the rest discarded");
  }

  const Integer km1 = static_cast<unsigned long>(rank - 1);
  DeepLower best;
  bool have = false;
  for (std::size_t n : candidates) {
    const std::size_t dim = bias ? n : n - 1;
    Integer value = 1;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
      const std::size_t groups = bias ? widths[l] / n : (widths[l] - 1) / (n - 1);
      value *= power(Integer(static_cast<unsigned long>(groups)) * km1 + 1, dim);
    }
    Integer last = 0;
    for (std::size_t j = 0; j <= dim; ++j) last += binomial(static_cast<long long>(widths.back()), j) * power(km1, j);
    value *= last;
    if (!have || value > best.value) {
      best = {value, n};
      have = true;
    }
  }
  return best;
}

Integer identity_inclusion_exclusion(long long m, long long n, long long r) {
  if (!(0 <= r && r <= n && n < m)) throw PreconditionError("needs 0 <= r <= n < m");
  Integer s = 0;
  for (long long j = 0; j <= n; ++j) {
    const Integer term = binomial(m - 1 - j, n - j) * binomial(m - r, j - r);
    if ((n - j) % 2 == 0) {
      s += term;
    } else {
      s -= term;
    }
  }
  return s;
}

Sides identity_reformulation(std::size_t m, std::size_t n, const std::vector<std::size_t>& ranks) {
  if (ranks.size() != m) throw InputError("expected " + std::to_string(m) + " ranks");
  if (m < n + 1) throw PreconditionError("needs m >= n+1");
  std::vector<Integer> k;
  for (std::size_t r : ranks) {
    if (r < 2) throw PreconditionError("needs every rank >= 2");
    k.emplace_back(static_cast<unsigned long>(r));
  }
  const auto ek = elementary_symmetric(k, n);
  const auto ekm1 = elementary_symmetric(minus_one(ranks), n);
  Sides out;
  out.lhs = 0;
  for (std::size_t j = 0; j <= n; ++j) {
    const Integer term =
        binomial(static_cast<long long>(m) - 1 - static_cast<long long>(j), static_cast<long long>(n - j)) * ek[j];
    if ((n - j) % 2 == 0) {
      out.lhs += term;
    } else {
      out.lhs -= term;
    }
  }
  out.rhs = sum_upto(ekm1, n);
  return out;
}

PriorBounds prior_bounds(std::size_t n, std::size_t m, std::size_t k) {
  if (k == 0 || m == 0 || n == 0) throw InputError("n, m and k must be positive");
  PriorBounds out;
  out.lower = power(Integer(static_cast<unsigned long>(k)), std::min(n, m));
  const long long pairs = static_cast<long long>(m * k * (k - 1) / 2);
  out.upper = 0;
  for (std::size_t j = 0; j <= n; ++j) out.upper += binomial(pairs, static_cast<long long>(j));
  return out;
}

}  // namespace tropic::bounds
