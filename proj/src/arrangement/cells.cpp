#include <algorithm>
#include <exception>

#ifdef TROPIC_HAVE_OPENMP
#include <omp.h>
#endif

#include "internal.hpp"
#include "tropic/errors.hpp"

namespace tropic::arrangement {

namespace {

using detail::AffineForm;
using detail::UnitClasses;

struct Node {
  std::size_t unit = 0;
  ConstraintSystem sys;
  Vector witness;
  std::vector<std::vector<std::size_t>> signature;
};

// Signature tree of one layer: level i fixes the tie set of unit i.
class SignatureTree {
 public:
  SignatureTree(const LayerSpec& layer, bool regions_only, const Budget& budget)
      : classes_(detail::layer_classes(layer)),
        dim_(layer.input_dim),
        regions_only_(regions_only),
        budget_(budget),
        lp_start_(geometry::lp_call_count()) {
    detail::check_signature_budget(layer, budget);
  }

  Node root() const {
    Node n;
    n.sys = ConstraintSystem(dim_);
    n.witness.assign(dim_, Rational(0));
    return n;
  }

  bool is_leaf(const Node& n) const { return n.unit == classes_.size(); }

  void expand(const Node& node, std::vector<Node>& out) const {
    detail::check_lp_budget(lp_start_, budget_);
    const UnitClasses& cl = classes_[node.unit];
    const std::size_t g = cl.forms.size();

    // Exact argmax classes at the parent's witness: that child is nonempty
    // with the same witness, no LP needed.
    std::uint64_t here = 0;
    {
      Rational best = detail::value(cl.forms[0], node.witness);
      here = 1;
      for (std::size_t c = 1; c < g; ++c) {
        const Rational v = detail::value(cl.forms[c], node.witness);
        if (v > best) {
          best = v;
          here = std::uint64_t{1} << c;
        } else if (v == best) {
          here |= std::uint64_t{1} << c;
        }
      }
    }

    const std::uint64_t full = g >= 64 ? UINT64_MAX : (std::uint64_t{1} << g) - 1;
    for (std::uint64_t mask = 1; mask <= full; ++mask) {
      if (regions_only_ && (mask & (mask - 1)) != 0) continue;
      Node child;
      child.unit = node.unit + 1;
      child.sys = node.sys;
      std::size_t lead = 0;
      while (!(mask >> lead & 1)) ++lead;
      std::vector<std::size_t> tie;
      for (std::size_t c = 0; c < g; ++c) {
        if (mask >> c & 1) {
          if (c != lead) detail::add_tie(child.sys, cl.forms[lead], cl.forms[c]);
          tie.insert(tie.end(), cl.members[c].begin(), cl.members[c].end());
        } else {
          detail::add_dominance(child.sys, cl.forms[lead], cl.forms[c]);
        }
      }
      if (mask == here) {
        child.witness = node.witness;
      } else {
        auto w = geometry::strictly_feasible(child.sys);
        if (!w) continue;
        child.witness = std::move(*w);
      }
      std::sort(tie.begin(), tie.end());
      child.signature = node.signature;
      child.signature.push_back(std::move(tie));
      out.push_back(std::move(child));
    }
  }

  Cell finish(const Node& n) const {
    Cell c;
    c.signature = n.signature;
    std::vector<Vector> rows;
    for (const auto& e : n.sys.equalities()) rows.push_back(e.coeffs);
    c.dim = static_cast<int>(dim_ - geometry::rank(rows, dim_));
    const auto profile = geometry::recession_profile(n.sys);
    c.bounded = profile.lineality_dim == 0 && profile.pointed_part_bounded;
    c.witness = n.witness;
    return c;
  }

 private:
  std::vector<UnitClasses> classes_;
  std::size_t dim_;
  bool regions_only_;
  Budget budget_;
  std::uint64_t lp_start_;
};

template <class Visit>
void walk(const SignatureTree& tree, const Node& node, Visit& visit) {
  if (tree.is_leaf(node)) {
    visit(node);
    return;
  }
  std::vector<Node> kids;
  tree.expand(node, kids);
  for (const auto& k : kids) walk(tree, k, visit);
}

std::vector<Cell> cells_serial(const SignatureTree& tree) {
  std::vector<Cell> out;
  auto visit = [&](const Node& n) { out.push_back(tree.finish(n)); };
  walk(tree, tree.root(), visit);
  return out;
}

// Expands the tree breadth-first (preserving DFS order) until there are
// enough independent subtrees, then walks them in parallel and
// concatenates per-subtree results in order.
std::vector<Cell> cells_parallel(const SignatureTree& tree) {
#ifdef TROPIC_HAVE_OPENMP
  const std::size_t target = 8 * static_cast<std::size_t>(omp_get_max_threads());
#else
  const std::size_t target = 1;
#endif
  std::vector<Node> frontier{tree.root()};
  for (;;) {
    bool any_inner = false;
    for (const auto& n : frontier) any_inner = any_inner || !tree.is_leaf(n);
    if (!any_inner || frontier.size() >= target) break;
    std::vector<Node> next;
    for (const auto& n : frontier) {
      if (tree.is_leaf(n)) {
        next.push_back(n);
      } else {
        tree.expand(n, next);
      }
    }
    frontier = std::move(next);
  }

  std::vector<std::vector<Cell>> parts(frontier.size());
  std::exception_ptr error;
  const long count = static_cast<long>(frontier.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      auto visit = [&](const Node& n) { parts[i].push_back(tree.finish(n)); };
      walk(tree, frontier[i], visit);
    } catch (...) {
#pragma omp critical(tropic_cells_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  std::vector<Cell> out;
  for (auto& p : parts) {
    for (auto& c : p) out.push_back(std::move(c));
  }
  return out;
}

RegionCount tally(const std::vector<Cell>& regions) {
  RegionCount rc;
  rc.regions = regions.size();
  for (const auto& c : regions) rc.bounded_regions += c.bounded ? 1 : 0;
  return rc;
}

}  // namespace

std::vector<Cell> enumerate_cells(const LayerSpec& layer, const Budget& budget) {
  return cells_parallel(SignatureTree(layer, false, budget));
}

std::vector<Cell> enumerate_cells_serial(const LayerSpec& layer, const Budget& budget) {
  return cells_serial(SignatureTree(layer, false, budget));
}

RegionCount count_regions_bruteforce(const LayerSpec& layer, const Budget& budget) {
  return tally(cells_parallel(SignatureTree(layer, true, budget)));
}

RegionCount count_regions_bruteforce_serial(const LayerSpec& layer, const Budget& budget) {
  return tally(cells_serial(SignatureTree(layer, true, budget)));
}

namespace {

struct DeepNode {
  std::size_t layer = 0;
  std::size_t unit = 0;
  ConstraintSystem sys;
  Vector witness;
  std::vector<AffineForm> inputs;   // current layer inputs as functions of x
  std::vector<AffineForm> outputs;  // outputs of the units fixed so far
};

}  // namespace

std::uint64_t count_regions_deep(const NetworkSpec& net, const Budget& budget) {
  net.validate();
  const std::size_t n0 = net.input_dim;
  const std::uint64_t lp_start = geometry::lp_call_count();

  DeepNode root;
  root.sys = ConstraintSystem(n0);
  root.witness.assign(n0, Rational(0));
  for (std::size_t j = 0; j < n0; ++j) {
    Vector e(n0, Rational(0));
    e[j] = 1;
    root.inputs.push_back({std::move(e), Rational(0)});
  }

  std::uint64_t count = 0;
  std::vector<DeepNode> stack{std::move(root)};
  while (!stack.empty()) {
    DeepNode node = std::move(stack.back());
    stack.pop_back();
    if (node.layer == net.layers.size()) {
      ++count;
      continue;
    }
    detail::check_lp_budget(lp_start, budget);
    const auto& unit = net.layers[node.layer].units[node.unit];

    // Compose the unit's preactivations with the affine inputs, merging
    // preactivations that coincide on this cell.
    std::vector<AffineForm> forms;
    for (std::size_t r = 0; r < unit.rank(); ++r) {
      AffineForm f{Vector(n0, Rational(0)), unit.bias(r)};
      for (std::size_t j = 0; j < node.inputs.size(); ++j) {
        const Rational& c = unit.weights[r][j];
        if (sgn(c) == 0) continue;
        f.w = f.w + c * node.inputs[j].w;
        f.b += c * node.inputs[j].b;
      }
      if (std::find(forms.begin(), forms.end(), f) == forms.end()) forms.push_back(std::move(f));
    }

    std::vector<DeepNode> kids;
    for (std::size_t c = 0; c < forms.size(); ++c) {
      DeepNode child;
      child.sys = node.sys;
      for (std::size_t o = 0; o < forms.size(); ++o) {
        if (o != c) detail::add_dominance(child.sys, forms[c], forms[o]);
      }
      bool reuse = true;
      const Rational here = detail::value(forms[c], node.witness);
      for (std::size_t o = 0; o < forms.size() && reuse; ++o) {
        if (o != c && detail::value(forms[o], node.witness) >= here) reuse = false;
      }
      if (reuse) {
        child.witness = node.witness;
      } else {
        auto w = geometry::strictly_feasible(child.sys);
        if (!w) continue;
        child.witness = std::move(*w);
      }
      child.outputs = node.outputs;
      child.outputs.push_back(forms[c]);
      if (node.unit + 1 == net.layers[node.layer].units.size()) {
        child.layer = node.layer + 1;
        child.unit = 0;
        child.inputs = std::move(child.outputs);
        child.outputs.clear();
      } else {
        child.layer = node.layer;
        child.unit = node.unit + 1;
        child.inputs = node.inputs;
      }
      kids.push_back(std::move(child));
    }
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(std::move(*it));
  }
  return count;
}

}  // namespace tropic::arrangement
