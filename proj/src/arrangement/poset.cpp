#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "internal.hpp"
#include "tropic/errors.hpp"

namespace tropic::arrangement {

namespace {

// Every atom containing `sys`. Atoms in `known` are taken as given; the
// rest are screened by the sample point before the containment LPs.
std::vector<std::size_t> closed_atoms(const Arrangement& arr, const ConstraintSystem& sys, const Vector& sample,
                                      const std::vector<std::size_t>& known) {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < arr.atoms.size(); ++a) {
    if (std::binary_search(known.begin(), known.end(), a)) {
      out.push_back(a);
      continue;
    }
    const auto& g = arr.atoms[a].geometry;
    if (!g.satisfied_by(sample)) continue;
    if (geometry::contains(g, sys)) out.push_back(a);
  }
  return out;
}

}  // namespace

Poset build_poset(const Arrangement& arr, std::size_t max_elements) {
  const std::size_t n = arr.ambient_dim;
  Poset poset;
  poset.ambient_dim = n;

  std::map<std::vector<std::size_t>, std::size_t> index;
  {
    PosetElement top;
    top.geometry = ConstraintSystem(n);
    poset.elements.push_back(std::move(top));
    index[{}] = 0;
  }

  for (std::size_t e = 0; e < poset.elements.size(); ++e) {
    for (std::size_t a = 0; a < arr.atoms.size(); ++a) {
      const auto& base = poset.elements[e];
      if (std::binary_search(base.atoms.begin(), base.atoms.end(), a)) continue;
      ConstraintSystem cand = base.geometry.intersect(arr.atoms[a].geometry);
      const auto sample = geometry::feasible(cand);
      if (!sample) continue;
      std::vector<std::size_t> known = base.atoms;
      known.insert(std::upper_bound(known.begin(), known.end(), a), a);
      auto closed = closed_atoms(arr, cand, *sample, known);
      if (index.count(closed)) continue;
      if (poset.elements.size() >= max_elements) {
        throw BudgetExceeded("intersection poset exceeds " + std::to_string(max_elements) + " elements",
                             "--max-poset");
      }
      PosetElement el;
      el.generator = base.generator;
      el.generator.insert(std::upper_bound(el.generator.begin(), el.generator.end(), a), a);
      el.atoms = closed;
      el.geometry = std::move(cand);
      index[std::move(closed)] = poset.elements.size();
      poset.elements.push_back(std::move(el));
    }
  }

  const std::size_t count = poset.elements.size();
  for (std::size_t i = 0; i < count; ++i) {
    auto& el = poset.elements[i];
    el.id = i;
    el.dim = *geometry::affine_dimension(el.geometry);
    el.psi = geometry::euler_characteristic(el.geometry);
    if (arr.central && el.dim == 0) continue;
    std::set<std::size_t> units;
    for (std::size_t a : el.atoms) units.insert(arr.atoms[a].unit);
    el.support = std::vector<std::size_t>(units.begin(), units.end());
  }

  // x <= y iff y is contained in x iff atoms(x) is a subset of atoms(y),
  // since every element is the intersection of its atoms.
  poset.leq.assign(count, std::vector<char>(count, 0));
  for (std::size_t x = 0; x < count; ++x) {
    const auto& ax = poset.elements[x].atoms;
    for (std::size_t y = 0; y < count; ++y) {
      const auto& ay = poset.elements[y].atoms;
      poset.leq[x][y] = std::includes(ay.begin(), ay.end(), ax.begin(), ax.end());
    }
  }

  // A strict chain strictly grows the atom set, so sorting by its size is
  // a linear extension.
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return poset.elements[l].atoms.size() < poset.elements[r].atoms.size();
  });

  poset.mobius.assign(count, std::vector<long long>(count, 0));
  for (std::size_t x = 0; x < count; ++x) {
    auto& mu = poset.mobius[x];
    for (std::size_t y : order) {
      if (!poset.leq[x][y]) continue;
      if (y == x) {
        mu[y] = 1;
        continue;
      }
      long long s = 0;
      for (std::size_t z = 0; z < count; ++z) {
        if (z != y && poset.leq[x][z] && poset.leq[z][y]) s += mu[z];
      }
      mu[y] = -s;
    }
  }

  for (std::size_t x = 0; x < count; ++x) {
    for (std::size_t y = 0; y < count; ++y) {
      if (x == y || !poset.leq[x][y]) continue;
      bool cover = true;
      for (std::size_t z = 0; z < count && cover; ++z) {
        if (z != x && z != y && poset.leq[x][z] && poset.leq[z][y]) cover = false;
      }
      if (cover) poset.covers.emplace_back(x, y);
    }
  }
  return poset;
}

long long count_regions_poset(const Poset& poset) {
  long long s = 0;
  for (std::size_t y = 0; y < poset.elements.size(); ++y) s += poset.elements[y].psi * poset.mu(y);
  return poset.ambient_dim % 2 == 0 ? s : -s;
}

long long count_regions_poset(const Arrangement& arr) { return count_regions_poset(build_poset(arr)); }

long long count_faces_poset(const Poset& poset, int s) {
  if (s < 0 || s >= static_cast<int>(poset.ambient_dim)) {
    throw PreconditionError("face dimension " + std::to_string(s) + " outside [0, " +
                            std::to_string(poset.ambient_dim) + ")");
  }
  long long total = 0;
  for (std::size_t x = 0; x < poset.elements.size(); ++x) {
    if (poset.elements[x].dim != s) continue;
    long long inner = 0;
    for (std::size_t y = 0; y < poset.elements.size(); ++y) {
      if (poset.leq[x][y]) inner += poset.elements[y].psi * poset.mobius[x][y];
    }
    total += s % 2 == 0 ? inner : -inner;
  }
  return total;
}

}  // namespace tropic::arrangement
