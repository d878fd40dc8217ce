#include <functional>

#include "internal.hpp"
#include "tropic/errors.hpp"

namespace tropic::arrangement {

SimplicityCertificate is_simple(const Arrangement& arr) {
  const int d = static_cast<int>(arr.ambient_dim);
  const std::size_t depth = arr.ambient_dim + (arr.central ? 0 : 1);

  std::vector<std::vector<std::size_t>> by_unit(arr.unit_count);
  for (std::size_t a = 0; a < arr.atoms.size(); ++a) by_unit[arr.atoms[a].unit].push_back(a);

  SimplicityCertificate cert;
  std::vector<std::size_t> chosen;
  // Extends `sys` (the intersection of `chosen`) by atoms of units >= first.
  std::function<bool(std::size_t, const ConstraintSystem&)> extend = [&](std::size_t first,
                                                                         const ConstraintSystem& sys) {
    if (chosen.size() == depth) return true;
    for (std::size_t u = first; u < by_unit.size(); ++u) {
      for (std::size_t a : by_unit[u]) {
        ConstraintSystem next = sys.intersect(arr.atoms[a].geometry);
        chosen.push_back(a);
        const auto dim = geometry::affine_dimension(next);
        const int j = static_cast<int>(chosen.size());
        if (dim) {
          const bool ok = *dim == d - j || (arr.central && *dim == 0);
          if (!ok) {
            cert.simple = false;
            cert.violating_atoms = chosen;
            return false;
          }
          // The origin absorbs every further central intersection.
          if (!(arr.central && *dim == 0) && !extend(u + 1, next)) return false;
        }
        chosen.pop_back();
      }
    }
    return true;
  };
  extend(0, ConstraintSystem(arr.ambient_dim));
  return cert;
}

namespace {

void require_simple(const LayerSpec& layer) {
  const auto cert = is_simple(build_atoms(layer));
  if (!cert.simple) throw PreconditionError("arrangement is not simple");
}

void require_atoms_everywhere(const LayerSpec& layer) {
  const auto arr = build_atoms(layer);
  std::vector<char> seen(layer.units.size(), 0);
  for (const auto& a : arr.atoms) seen[a.unit] = 1;
  for (std::size_t u = 0; u < seen.size(); ++u) {
    if (!seen[u]) throw PreconditionError("unit " + std::to_string(u + 1) + " has an empty arrangement");
  }
}

// sum_{j=0}^{n} (-1)^(n-j) C(m-1-j, n-j) sum_{|S|=j} r(A_S), r(A_empty) = 1.
long long alternating_subsum(const LayerSpec& layer, std::size_t n, const Budget& budget) {
  const std::size_t m = layer.units.size();
  std::vector<long long> by_size(n + 1, 0);
  by_size[0] = 1;
  std::vector<std::size_t> subset;
  std::function<void(std::size_t)> rec = [&](std::size_t next) {
    if (!subset.empty()) {
      by_size[subset.size()] +=
          static_cast<long long>(count_regions_bruteforce(layer.restrict_units(subset), budget).regions);
    }
    if (subset.size() == n) return;
    for (std::size_t i = next; i < m; ++i) {
      subset.push_back(i);
      rec(i + 1);
      subset.pop_back();
    }
  };
  rec(0);
  long long rhs = 0;
  for (std::size_t j = 0; j <= n; ++j) {
    const long long coeff = detail::binomial(static_cast<long long>(m) - 1 - static_cast<long long>(j),
                                             static_cast<long long>(n - j));
    rhs += ((n - j) % 2 == 0 ? 1 : -1) * coeff * by_size[j];
  }
  return rhs;
}

}  // namespace

IdentityCheck subsum_identity_noncentral(const LayerSpec& layer, const Budget& budget) {
  layer.validate();
  if (layer.bias_mode != network::BiasMode::with_bias) throw PreconditionError("non-central identity needs a bias layer");
  const std::size_t n = layer.input_dim;
  const std::size_t m = layer.units.size();
  if (m < n + 1) {
    throw PreconditionError("non-central identity needs m >= n+1 (m = " + std::to_string(m) +
                            ", n = " + std::to_string(n) + ")");
  }
  require_atoms_everywhere(layer);
  require_simple(layer);
  IdentityCheck out;
  out.lhs = static_cast<long long>(count_regions_bruteforce(layer, budget).regions);
  out.rhs = alternating_subsum(layer, n, budget);
  return out;
}

IdentityCheck subsum_identity_central(const LayerSpec& layer, const Budget& budget) {
  layer.validate();
  if (layer.bias_mode != network::BiasMode::no_bias) throw PreconditionError("central identity needs a no_bias layer");
  if (layer.input_dim < 2) throw PreconditionError("central identity needs ambient dimension >= 2");
  const std::size_t n = layer.input_dim - 1;
  const std::size_t m = layer.units.size();
  if (m < n + 1) {
    throw PreconditionError("central identity needs m >= n+1 (m = " + std::to_string(m) + ", n = " +
                            std::to_string(n) + ")");
  }
  require_atoms_everywhere(layer);
  require_simple(layer);
  IdentityCheck out;
  out.lhs = static_cast<long long>(count_regions_bruteforce(layer, budget).regions);
  out.rhs = detail::binomial(static_cast<long long>(m) - 1, static_cast<long long>(n)) +
            alternating_subsum(layer, n, budget);
  return out;
}

GapReport bounded_region_gap(const LayerSpec& layer, const Vector& w, const Rational& offset, const Budget& budget) {
  layer.validate();
  if (layer.bias_mode != network::BiasMode::no_bias) throw PreconditionError("gap bound needs a central layer");
  if (w.size() != layer.input_dim) throw InputError("hyperplane normal has the wrong dimension");
  if (is_zero(w)) throw InputError("hyperplane normal is zero");
  if (sgn(offset) == 0) throw PreconditionError("hyperplane passes through the origin");
  if (layer.input_dim < 2) throw PreconditionError("gap bound needs ambient dimension >= 2");
  const std::size_t n = layer.input_dim - 1;
  const std::size_t m = layer.units.size();
  if (m < n + 1) {
    throw PreconditionError("gap bound needs m >= n+1 (m = " + std::to_string(m) + ", n = " +
                            std::to_string(n) + ")");
  }
  require_simple(layer);

  const Rational scale = offset / dot(w, w);
  const Vector origin = scale * w;
  const auto dirs = geometry::nullspace_basis({w}, layer.input_dim);
  const LayerSpec slice = restrict_to_affine(layer, origin, dirs);

  GapReport rep;
  rep.r_A = count_regions_bruteforce(layer, budget).regions;
  rep.r_Ag = count_regions_bruteforce(slice, budget).regions;
  rep.gap = static_cast<long long>(rep.r_A) - static_cast<long long>(rep.r_Ag);
  rep.floor = detail::binomial(static_cast<long long>(m) - 1, static_cast<long long>(n));
  return rep;
}

}  // namespace tropic::arrangement
