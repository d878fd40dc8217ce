#include <algorithm>
#include <numeric>
#include <random>

#include "tropic/arrangement.hpp"
#include "tropic/bounds.hpp"
#include "tropic/errors.hpp"
#include "tropic/network.hpp"

namespace tropic::network {

namespace {

constexpr int kMaxRetries = 64;

void require_ranks(const std::vector<std::size_t>& ranks) {
  if (ranks.empty()) throw PreconditionError("at least one unit is required");
  for (std::size_t k : ranks) {
    if (k < 2) throw PreconditionError("optimal constructions need every rank >= 2");
  }
}

// Distinct positive integers, seeded.
std::vector<long> moment_parameters(std::size_t m, std::mt19937_64& rng) {
  std::vector<long> pool(2 * m + 2);
  std::iota(pool.begin(), pool.end(), 1);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(m);
  return pool;
}

// Unit i: r <w_i, x> - r(r-1)/2 - r delta_i, r = 0..k_i-1. The breaks sit
// on the parallel hyperplanes <w_i, x> = delta_i + r.
LayerSpec moment_layer(std::size_t n, const std::vector<std::size_t>& ranks, const std::vector<long>& t,
                       const std::vector<Rational>& delta) {
  LayerSpec layer{n, BiasMode::with_bias, {}};
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    Vector w(n);
    Integer p = 1;
    for (std::size_t c = 0; c < n; ++c) {
      w[c] = p;
      p *= t[i];
    }
    MaxoutUnitSpec unit;
    unit.biases.emplace();
    for (std::size_t r = 0; r < ranks[i]; ++r) {
      const Rational rr = static_cast<long>(r);
      unit.weights.push_back(rr * w);
      unit.biases->push_back(-rr * (rr - 1) / 2 - rr * delta[i]);
    }
    layer.units.push_back(std::move(unit));
  }
  return layer;
}

std::vector<Rational> base_shifts(std::size_t m) {
  std::vector<Rational> delta;
  for (std::size_t i = 1; i <= m; ++i) delta.emplace_back(static_cast<long>(i), static_cast<long>(m + 1));
  for (auto& d : delta) d.canonicalize();
  return delta;
}

// Nudges every shift by a seeded multiple of 1/(997 (m+1)^2), keeping them
// distinct and inside (0, 1).
void perturb(std::vector<Rational>& delta, std::mt19937_64& rng) {
  const long m = static_cast<long>(delta.size());
  std::uniform_int_distribution<long> step(-(m + 1) / 2 - 1, (m + 1) / 2 + 1);
  for (std::size_t i = 0; i < delta.size(); ++i) {
    Rational d(static_cast<long>(i + 1) * 997 * (m + 1) + step(rng), 997 * (m + 1) * (m + 1));
    d.canonicalize();
    delta[i] = d;
  }
}

LayerSpec homogenize(const LayerSpec& layer) {
  LayerSpec out{layer.input_dim + 1, BiasMode::no_bias, {}};
  for (const auto& unit : layer.units) {
    MaxoutUnitSpec u;
    for (std::size_t r = 0; r < unit.rank(); ++r) {
      Vector w = unit.weights[r];
      w.push_back(unit.bias(r));
      u.weights.push_back(std::move(w));
    }
    out.units.push_back(std::move(u));
  }
  return out;
}

template <class Build>
LayerSpec certified(std::size_t m, std::uint64_t seed, Build build) {
  std::mt19937_64 rng(seed);
  const auto t = moment_parameters(m, rng);
  auto delta = base_shifts(m);
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    LayerSpec layer = build(t, delta);
    if (arrangement::is_simple(arrangement::build_atoms(layer)).simple) return layer;
    perturb(delta, rng);
  }
  throw PreconditionError("could not certify a simple arrangement; try another seed");
}

}  // namespace

LayerSpec construct_shallow_optimal(std::size_t n, const std::vector<std::size_t>& ranks, std::uint64_t seed) {
  if (n == 0) throw PreconditionError("input dimension must be positive");
  require_ranks(ranks);
  return certified(ranks.size(), seed, [&](const std::vector<long>& t, const std::vector<Rational>& delta) {
    return moment_layer(n, ranks, t, delta);
  });
}

LayerSpec construct_shallow_optimal_nobias(std::size_t n, const std::vector<std::size_t>& ranks,
                                           std::uint64_t seed) {
  if (n == 0) throw InputError("input dimension must be positive");
  require_ranks(ranks);
  if (n == 1) {
    // Every bias-free layer on the line has two regions, split at 0.
    LayerSpec line{1, BiasMode::no_bias, {}};
    for (std::size_t k : ranks) {
      MaxoutUnitSpec u;
      for (std::size_t r = 0; r < k; ++r) u.weights.push_back({Rational(static_cast<long>(r))});
      line.units.push_back(std::move(u));
    }
    return line;
  }
  return certified(ranks.size(), seed, [&](const std::vector<long>& t, const std::vector<Rational>& delta) {
    return homogenize(moment_layer(n - 1, ranks, t, delta));
  });
}

namespace {

// One zig-zag unit: preactivation r equals slope[r] * y + offset[r], with
// y the folded coordinate `group`. Its output enters the coordinate sum
// with sign `sign`.
struct ZigZagUnit {
  std::size_t group = 0;
  int sign = 1;
  Vector slope;
  Vector offset;
};

// Units of one hidden layer: per coordinate, `per_group` convex units
// whose signed sum maps [0,1] onto [0,1] with B = per_group (k-1) breaks
// at j / (B+1), slopes alternating between +(B+1) and -(B+1).
std::vector<ZigZagUnit> zigzag_layer(std::size_t n, std::size_t per_group, std::size_t k) {
  const std::size_t breaks = per_group * (k - 1);
  const Rational s = static_cast<long>(breaks + 1);
  auto beta = [&](std::size_t j) {
    Rational b(static_cast<long>(j), static_cast<long>(breaks + 1));
    b.canonicalize();
    return b;
  };
  std::vector<std::size_t> valleys, peaks;
  for (std::size_t j = 1; j <= breaks; ++j) (j % 2 == 0 ? valleys : peaks).push_back(j);

  std::vector<ZigZagUnit> out;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t q = 0; q < per_group; ++q) {
      const bool positive = q < per_group / 2;
      const auto& pool = positive ? valleys : peaks;
      const std::size_t first = (positive ? q : q - per_group / 2) * (k - 1);
      ZigZagUnit u;
      u.group = c;
      u.sign = positive ? 1 : -1;
      // Convex: sum of 2s (y - beta) over the first r assigned breaks.
      Rational slope = q == 0 ? s : Rational(0);  // linear term s*y rides on the first unit
      Rational offset = 0;
      u.slope.push_back(slope);
      u.offset.push_back(offset);
      for (std::size_t r = 1; r < k; ++r) {
        slope += 2 * s;
        offset -= 2 * s * beta(pool[first + r - 1]);
        u.slope.push_back(slope);
        u.offset.push_back(offset);
      }
      out.push_back(std::move(u));
    }
  }
  return out;
}

// Weights that read folded coordinate c from the previous layer: either
// the raw input x_c or the signed sum over the previous group c.
Vector reader(std::size_t c, std::size_t in_dim, const std::vector<ZigZagUnit>* prev) {
  Vector w(in_dim, Rational(0));
  if (!prev) {
    w[c] = 1;
    return w;
  }
  for (std::size_t u = 0; u < prev->size(); ++u) {
    if ((*prev)[u].group == c) w[u] = (*prev)[u].sign;
  }
  return w;
}

// Affine change of coordinates putting every region witness of `layer`
// inside [1/4, 3/4]^n.
LayerSpec squeeze_into_box(const LayerSpec& layer) {
  const std::size_t n = layer.input_dim;
  const auto cells = arrangement::enumerate_cells_serial(layer);
  Vector lo, hi;
  for (const auto& cell : cells) {
    if (cell.dim != static_cast<int>(n)) continue;
    if (lo.empty()) {
      lo = hi = cell.witness;
      continue;
    }
    for (std::size_t c = 0; c < n; ++c) {
      lo[c] = std::min(lo[c], cell.witness[c]);
      hi[c] = std::max(hi[c], cell.witness[c]);
    }
  }
  // x = lo + 2 (hi - lo) (z - 1/4)
  Vector origin(n);
  std::vector<Vector> dirs;
  for (std::size_t c = 0; c < n; ++c) {
    Rational width = hi[c] - lo[c];
    if (sgn(width) == 0) width = 1;
    origin[c] = lo[c] - width / 2;
    Vector d(n, Rational(0));
    d[c] = 2 * width;
    dirs.push_back(std::move(d));
  }
  return arrangement::restrict_to_affine(layer, origin, dirs);
}

}  // namespace

DeepConstruction construct_deep_lower(std::size_t n0, const std::vector<std::size_t>& widths, std::size_t rank,
                                      std::uint64_t seed) {
  if (rank < 2) throw PreconditionError("deep construction needs rank >= 2");
  const auto choice = bounds::deep_lower(n0, widths, rank, BiasMode::with_bias);
  const std::size_t n = choice.n;

  DeepConstruction out;
  out.folded_dim = n;
  out.network.input_dim = n0;

  std::vector<ZigZagUnit> prev;
  bool have_prev = false;
  std::size_t in_dim = n0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    auto units = zigzag_layer(n, widths[l] / n, rank);
    LayerSpec layer{in_dim, BiasMode::with_bias, {}};
    for (const auto& z : units) {
      const Vector read = reader(z.group, in_dim, have_prev ? &prev : nullptr);
      MaxoutUnitSpec spec;
      spec.biases.emplace();
      for (std::size_t r = 0; r < rank; ++r) {
        spec.weights.push_back(z.slope[r] * read);
        spec.biases->push_back(z.offset[r]);
      }
      layer.units.push_back(std::move(spec));
    }
    out.network.layers.push_back(std::move(layer));
    prev = std::move(units);
    have_prev = true;
    in_dim = widths[l];
  }

  const std::vector<std::size_t> last_ranks(widths.back(), rank);
  LayerSpec last = construct_shallow_optimal(n, last_ranks, seed);
  if (have_prev) {
    last = squeeze_into_box(last);
  } else if (n0 > n) {
    last = arrangement::restrict_to_affine(last, Vector(n, Rational(0)), [&] {
      std::vector<Vector> dirs;
      for (std::size_t c = 0; c < n0; ++c) {
        Vector d(n, Rational(0));
        if (c < n) d[c] = 1;
        dirs.push_back(std::move(d));
      }
      return dirs;
    }());
  }
  if (have_prev) {
    LayerSpec lifted{in_dim, BiasMode::with_bias, {}};
    for (const auto& unit : last.units) {
      MaxoutUnitSpec spec;
      spec.biases = unit.biases;
      for (const auto& v : unit.weights) {
        Vector w(in_dim, Rational(0));
        for (std::size_t c = 0; c < n; ++c) w = w + v[c] * reader(c, in_dim, &prev);
        spec.weights.push_back(std::move(w));
      }
      lifted.units.push_back(std::move(spec));
    }
    last = std::move(lifted);
  }
  out.network.layers.push_back(std::move(last));
  out.network.validate();
  return out;
}

}  // namespace tropic::network
