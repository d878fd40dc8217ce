#include "tropic/minkowski.hpp"

#include <exception>
#include <functional>
#include <random>
#include <set>

#include "../common/json_util.hpp"
#include "tropic/errors.hpp"
#include "tropic/geometry.hpp"

namespace tropic::minkowski {

using geometry::ConstraintSystem;
using nlohmann::json;

LabeledPointSet make_point_set(std::size_t dim, const std::vector<Vector>& points, std::string label) {
  if (dim == 0) throw InputError("point sets need dimension >= 1");
  LabeledPointSet out{dim, {}, std::move(label)};
  std::set<Vector, VectorLess> seen;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) {
      throw InputError("point " + std::to_string(i) + " has dimension " + std::to_string(points[i].size()) +
                       ", expected " + std::to_string(dim));
    }
    if (seen.insert(points[i]).second) out.points.push_back(points[i]);
  }
  return out;
}

LabeledPointSet parse_point_set(const std::string& json_text) {
  const json doc = jsonutil::parse_document(json_text);
  const std::size_t dim = jsonutil::positive_int(jsonutil::field(doc, "dim", "$"), "$.dim");
  const json& pts = jsonutil::field(doc, "points", "$");
  if (!pts.is_array() || pts.empty()) jsonutil::fail("$.points", "expected a nonempty array");
  std::vector<Vector> points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string path = "$.points[" + std::to_string(i) + "]";
    Vector p = jsonutil::vector_of(pts[i], path);
    if (p.size() != dim) jsonutil::fail(path, "has length " + std::to_string(p.size()) + ", expected " + std::to_string(dim));
    points.push_back(std::move(p));
  }
  std::string label;
  if (const auto it = doc.find("label"); it != doc.end()) {
    if (!it->is_string()) jsonutil::fail("$.label", "expected a string");
    label = it->get<std::string>();
  }
  return make_point_set(dim, points, std::move(label));
}

std::string serialize_point_set(const LabeledPointSet& set) {
  json doc;
  doc["dim"] = set.dim;
  json pts = json::array();
  for (const auto& p : set.points) pts.push_back(jsonutil::encode(p));
  doc["points"] = std::move(pts);
  doc["label"] = set.label;
  return doc.dump(2);
}

std::vector<LabeledPointSet> lift_layer(const network::LayerSpec& layer) {
  layer.validate();
  const bool bias = layer.bias_mode == network::BiasMode::with_bias;
  const std::size_t dim = layer.input_dim + (bias ? 1 : 0);
  std::vector<LabeledPointSet> out;
  for (std::size_t u = 0; u < layer.units.size(); ++u) {
    const auto& unit = layer.units[u];
    std::vector<Vector> points;
    for (std::size_t r = 0; r < unit.rank(); ++r) {
      Vector p = unit.weights[r];
      if (bias) p.push_back(unit.bias(r));
      points.push_back(std::move(p));
    }
    out.push_back(make_point_set(dim, points, "unit " + std::to_string(u + 1)));
  }
  return out;
}

LabeledPointSet minkowski_sum(const std::vector<LabeledPointSet>& sets) {
  if (sets.empty()) throw InputError("Minkowski sum of no sets");
  const std::size_t dim = sets.front().dim;
  std::set<Vector, VectorLess> acc{Vector(dim, Rational(0))};
  std::string label;
  for (const auto& s : sets) {
    if (s.dim != dim) throw InputError("Minkowski sum of sets with different dimensions");
    if (s.points.empty()) throw InputError("Minkowski sum with an empty set");
    std::set<Vector, VectorLess> next;
    for (const auto& a : acc) {
      for (const auto& p : s.points) next.insert(a + p);
    }
    acc = std::move(next);
    label += (label.empty() ? "" : " + ") + (s.label.empty() ? std::string("P") : s.label);
  }
  return {dim, std::vector<Vector>(acc.begin(), acc.end()), label};
}

namespace {

enum class Side { any, up, down };

// Is there c with <c, p - q> > 0 for every other point q (and c_last > 0 or
// < 0 when asked)? Maximizes a shared margin t over a box-normalized c,
// adding the most violated point to a working set until the margin
// certificate covers every point.
bool separable(const Vector& p, const std::vector<Vector>& points, std::size_t self, Side side) {
  const std::size_t d = p.size();
  std::vector<std::size_t> work;
  std::vector<char> used(points.size(), 0);
  for (std::size_t q = 0; q < points.size() && work.size() < d + 1; ++q) {
    if (q == self) continue;
    work.push_back(q);
    used[q] = 1;
  }
  if (work.empty()) return true;

  for (;;) {
    ConstraintSystem sys(d + 1);
    for (std::size_t q : work) {
      Vector a = p - points[q];
      a.emplace_back(-1);
      sys.add_inequality(std::move(a), Rational(0));
    }
    for (std::size_t i = 0; i < d; ++i) {
      Vector lo(d + 1, Rational(0)), hi(d + 1, Rational(0));
      lo[i] = 1;
      hi[i] = -1;
      sys.add_inequality(std::move(lo), Rational(-1));
      sys.add_inequality(std::move(hi), Rational(-1));
    }
    Vector cap(d + 1, Rational(0));
    cap[d] = -1;
    sys.add_inequality(std::move(cap), Rational(-1));
    if (side != Side::any) {
      Vector s(d + 1, Rational(0));
      s[d - 1] = side == Side::up ? 1 : -1;
      s[d] = -1;
      sys.add_inequality(std::move(s), Rational(0));
    }
    Vector objective(d + 1, Rational(0));
    objective[d] = 1;
    const auto res = geometry::maximize(sys, objective);
    if (res.status != geometry::LpStatus::optimal || sgn(res.value) <= 0) return false;

    Vector c(res.point.begin(), res.point.begin() + static_cast<long>(d));
    std::size_t worst = points.size();
    Rational worst_val;
    for (std::size_t q = 0; q < points.size(); ++q) {
      if (q == self || used[q]) continue;
      const Rational v = dot(c, p - points[q]);
      if (sgn(v) <= 0 && (worst == points.size() || v < worst_val)) {
        worst = q;
        worst_val = v;
      }
    }
    if (worst == points.size()) return true;
    work.push_back(worst);
    used[worst] = 1;
  }
}

VertexFlags classify_point(const LabeledPointSet& set, std::size_t i) {
  VertexFlags f;
  const Vector& p = set.points[i];
  f.vertex = separable(p, set.points, i, Side::any);
  if (!f.vertex) return f;
  f.upper = separable(p, set.points, i, Side::up);
  if (!f.upper) f.strict_lower = separable(p, set.points, i, Side::down);
  return f;
}

VertexClassification tally(std::vector<VertexFlags> flags) {
  VertexClassification out;
  for (const auto& f : flags) {
    out.vertices += f.vertex;
    out.upper += f.upper;
    out.strict_lower += f.strict_lower;
    out.horizontal_only += f.horizontal_only();
  }
  out.flags = std::move(flags);
  return out;
}

}  // namespace

VertexClassification classify_vertices_serial(const LabeledPointSet& set) {
  std::vector<VertexFlags> flags(set.points.size());
  for (std::size_t i = 0; i < set.points.size(); ++i) flags[i] = classify_point(set, i);
  return tally(std::move(flags));
}

VertexClassification classify_vertices(const LabeledPointSet& set) {
  std::vector<VertexFlags> flags(set.points.size());
  std::exception_ptr error;
  const long count = static_cast<long>(set.points.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < count; ++i) {
    try {
      flags[i] = classify_point(set, static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(tropic_vertex_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return tally(std::move(flags));
}

namespace {

LabeledPointSet vertices_only(const LabeledPointSet& set) {
  const auto cls = classify_vertices(set);
  LabeledPointSet out{set.dim, {}, set.label};
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    if (cls.flags[i].vertex) out.points.push_back(set.points[i]);
  }
  return out;
}

template <class Visit>
void for_each_subset(std::size_t m, std::size_t max_size, Visit visit) {
  std::vector<std::size_t> subset;
  std::function<void(std::size_t)> rec = [&](std::size_t next) {
    if (!subset.empty()) visit(subset);
    if (subset.size() == max_size) return;
    for (std::size_t i = next; i < m; ++i) {
      subset.push_back(i);
      rec(i + 1);
      subset.pop_back();
    }
  };
  rec(0);
}

std::vector<LabeledPointSet> pick(const std::vector<LabeledPointSet>& sets, const std::vector<std::size_t>& subset) {
  std::vector<LabeledPointSet> out;
  for (std::size_t i : subset) out.push_back(sets[i]);
  return out;
}

long long binom(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  long long out = 1;
  for (long long i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

LabeledPointSet sum_of_vertices(const std::vector<LabeledPointSet>& sets) {
  std::vector<LabeledPointSet> reduced;
  for (const auto& s : sets) reduced.push_back(vertices_only(s));
  return minkowski_sum(reduced);
}

std::uint64_t dual_region_count(const network::LayerSpec& layer) {
  layer.validate();
  const auto cls = classify_vertices(sum_of_vertices(lift_layer(layer)));
  return layer.bias_mode == network::BiasMode::with_bias ? cls.upper : cls.vertices;
}

DualityReport duality_check(const network::LayerSpec& layer, const arrangement::Budget& budget) {
  DualityReport rep;
  rep.region_count = arrangement::count_regions_bruteforce(layer, budget).regions;
  rep.vertex_count = dual_region_count(layer);
  return rep;
}

IdentitySides weibel_upper_identity(const std::vector<LabeledPointSet>& sets) {
  if (sets.empty()) throw PreconditionError("needs at least one point set");
  const std::size_t d = sets.front().dim;
  for (const auto& s : sets) {
    if (s.dim != d) throw InputError("point sets of different dimensions");
    if (s.points.size() < 2) throw PreconditionError("every summand must be positive-dimensional");
  }
  if (d < 2) throw PreconditionError("needs ambient dimension n+1 >= 2");
  const std::size_t n = d - 1;
  const std::size_t m = sets.size();
  if (m < n + 1) {
    throw PreconditionError("needs m >= n+1 (m = " + std::to_string(m) + ", n = " + std::to_string(n) + ")");
  }
  std::vector<LabeledPointSet> reduced;
  for (const auto& s : sets) reduced.push_back(vertices_only(s));

  IdentitySides out;
  out.lhs = static_cast<long long>(classify_vertices(minkowski_sum(reduced)).upper);
  std::vector<long long> by_size(n + 1, 0);
  by_size[0] = 1;
  for_each_subset(m, n, [&](const std::vector<std::size_t>& subset) {
    by_size[subset.size()] += static_cast<long long>(classify_vertices(minkowski_sum(pick(reduced, subset))).upper);
  });
  for (std::size_t j = 0; j <= n; ++j) {
    const long long c = binom(static_cast<long long>(m) - 1 - static_cast<long long>(j), static_cast<long long>(n - j));
    out.rhs += ((n - j) % 2 == 0 ? 1 : -1) * c * by_size[j];
  }
  return out;
}

namespace {

network::LayerSpec as_layer(const std::vector<LabeledPointSet>& sets) {
  const std::size_t d = sets.front().dim;
  network::LayerSpec layer{d - 1, network::BiasMode::with_bias, {}};
  for (const auto& s : sets) {
    network::MaxoutUnitSpec unit;
    unit.biases.emplace();
    for (const auto& p : s.points) {
      unit.weights.emplace_back(p.begin(), p.end() - 1);
      unit.biases->push_back(p.back());
    }
    layer.units.push_back(std::move(unit));
  }
  return layer;
}

}  // namespace

bool general_orientation(const std::vector<LabeledPointSet>& sets) {
  if (sets.empty() || sets.front().dim < 2) return false;
  for (const auto& s : sets) {
    if (s.points.size() < 2 || s.dim != sets.front().dim) return false;
  }
  const auto layer = as_layer(sets);
  const auto arr = arrangement::build_atoms(layer);
  std::vector<char> seen(sets.size(), 0);
  for (const auto& a : arr.atoms) seen[a.unit] = 1;
  for (char s : seen) {
    if (!s) return false;
  }
  return arrangement::is_simple(arr).simple;
}

SampledFamily sample_general_family(std::size_t n, std::size_t m, std::size_t max_points, std::uint64_t seed,
                                    std::int64_t bound, std::size_t max_tries) {
  if (n == 0 || m == 0) throw PreconditionError("n and m must be positive");
  if (max_points < 2) throw PreconditionError("each set needs room for two points");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> coord(-bound, bound);
  std::uniform_int_distribution<std::size_t> size(2, max_points);
  SampledFamily out;
  for (std::size_t attempt = 0; attempt < max_tries; ++attempt) {
    std::vector<LabeledPointSet> sets;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<Vector> pts(size(rng), Vector(n + 1));
      for (auto& p : pts) {
        for (auto& x : p) x = Rational(static_cast<long>(coord(rng)));
      }
      sets.push_back(make_point_set(n + 1, pts, "P" + std::to_string(i + 1)));
    }
    if (general_orientation(sets)) {
      out.sets = std::move(sets);
      return out;
    }
    ++out.resamples;
  }
  throw PreconditionError("no general-orientation family within " + std::to_string(max_tries) +
                          " tries; use a larger grid bound");
}

std::vector<PartialSum> partial_sum_trivial_bound(const std::vector<LabeledPointSet>& sets, std::size_t n) {
  std::vector<LabeledPointSet> reduced;
  std::vector<std::size_t> f0;
  for (const auto& s : sets) {
    reduced.push_back(vertices_only(s));
    f0.push_back(reduced.back().points.size());
  }
  std::vector<PartialSum> out;
  for_each_subset(sets.size(), n, [&](const std::vector<std::size_t>& subset) {
    PartialSum ps;
    ps.subset = subset;
    ps.actual = classify_vertices(minkowski_sum(pick(reduced, subset))).vertices;
    ps.trivial = 1;
    for (std::size_t i : subset) ps.trivial *= static_cast<unsigned long>(f0[i]);
    out.push_back(std::move(ps));
  });
  return out;
}

}  // namespace tropic::minkowski
