#include <cstdlib>
#include <string>

#include "internal.hpp"
#include "tropic/errors.hpp"

namespace tropic::arrangement {

Budget Budget::from_env() {
  Budget b;
  if (const char* env = std::getenv("TROPIC_BUDGET_LP")) {
    try {
      b.max_lp_calls = std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("TROPIC_BUDGET_LP is not a non-negative integer: ") + env);
    }
  }
  return b;
}

namespace detail {

UnitClasses unit_classes(const network::MaxoutUnitSpec& unit, std::size_t dim) {
  UnitClasses out;
  for (std::size_t r = 0; r < unit.rank(); ++r) {
    if (unit.weights[r].size() != dim) throw InputError("weight length differs from input_dim");
    AffineForm f{unit.weights[r], unit.bias(r)};
    std::size_t c = 0;
    while (c < out.forms.size() && !(out.forms[c] == f)) ++c;
    if (c == out.forms.size()) {
      out.forms.push_back(std::move(f));
      out.members.emplace_back();
    }
    out.members[c].push_back(r);
  }
  return out;
}

std::vector<UnitClasses> layer_classes(const LayerSpec& layer) {
  layer.validate();
  std::vector<UnitClasses> out;
  out.reserve(layer.units.size());
  for (const auto& u : layer.units) out.push_back(unit_classes(u, layer.input_dim));
  return out;
}

void add_dominance(ConstraintSystem& sys, const AffineForm& lhs, const AffineForm& rhs) {
  sys.add_inequality(lhs.w - rhs.w, rhs.b - lhs.b);
}

void add_tie(ConstraintSystem& sys, const AffineForm& lhs, const AffineForm& rhs) {
  sys.add_equality(lhs.w - rhs.w, rhs.b - lhs.b);
}

Rational value(const AffineForm& f, const Vector& x) { return dot(f.w, x) + f.b; }

void check_lp_budget(std::uint64_t start, const Budget& budget) {
  if (geometry::lp_call_count() - start > budget.max_lp_calls) {
    throw BudgetExceeded("LP-call budget of " + std::to_string(budget.max_lp_calls) + " exceeded",
                         "TROPIC_BUDGET_LP");
  }
}

void check_signature_budget(const LayerSpec& layer, const Budget& budget) {
  // prod (2^k - 1), saturating.
  std::uint64_t total = 1;
  for (const auto& u : layer.units) {
    const std::size_t k = u.rank();
    const std::uint64_t factor = k >= 63 ? UINT64_MAX : (std::uint64_t{1} << k) - 1;
    if (factor != 0 && total > budget.max_signatures / factor + 1) {
      total = UINT64_MAX;
      break;
    }
    total *= factor;
  }
  if (total > budget.max_signatures) {
    throw BudgetExceeded("signature budget of " + std::to_string(budget.max_signatures) + " exceeded",
                         "--max-signatures");
  }
}

long long binomial(long long n, long long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long out = 1;
  for (long long i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace detail

Arrangement build_atoms(const LayerSpec& layer) {
  const auto classes = detail::layer_classes(layer);
  Arrangement arr;
  arr.ambient_dim = layer.input_dim;
  arr.unit_count = layer.units.size();
  arr.central = layer.bias_mode == network::BiasMode::no_bias;
  const int codim1 = static_cast<int>(layer.input_dim) - 1;
  for (std::size_t u = 0; u < classes.size(); ++u) {
    const auto& cl = classes[u];
    for (std::size_t a = 0; a < cl.forms.size(); ++a) {
      for (std::size_t b = a + 1; b < cl.forms.size(); ++b) {
        ConstraintSystem sys(layer.input_dim);
        detail::add_tie(sys, cl.forms[a], cl.forms[b]);
        for (std::size_t c = 0; c < cl.forms.size(); ++c) {
          if (c != a && c != b) detail::add_dominance(sys, cl.forms[a], cl.forms[c]);
        }
        const auto dim = geometry::affine_dimension(sys);
        if (!dim || *dim != codim1) continue;
        arr.atoms.push_back({u, cl.members[a].front(), cl.members[b].front(), std::move(sys)});
      }
    }
  }
  return arr;
}

LayerSpec restrict_to_affine(const LayerSpec& layer, const Vector& origin, const std::vector<Vector>& dirs) {
  layer.validate();
  if (origin.size() != layer.input_dim) throw InputError("restriction origin has the wrong dimension");
  if (dirs.empty()) throw InputError("restriction needs at least one direction");
  for (const auto& d : dirs) {
    if (d.size() != layer.input_dim) throw InputError("restriction direction has the wrong dimension");
  }
  LayerSpec out{dirs.size(), network::BiasMode::with_bias, {}};
  for (const auto& unit : layer.units) {
    network::MaxoutUnitSpec ru;
    ru.biases.emplace();
    for (std::size_t r = 0; r < unit.rank(); ++r) {
      Vector w;
      w.reserve(dirs.size());
      for (const auto& d : dirs) w.push_back(dot(unit.weights[r], d));
      ru.weights.push_back(std::move(w));
      ru.biases->push_back(dot(unit.weights[r], origin) + unit.bias(r));
    }
    out.units.push_back(std::move(ru));
  }
  return out;
}

}  // namespace tropic::arrangement
