#include "simplex.hpp"

#include <atomic>
#include <limits>

namespace tropic::geometry {

namespace {
std::atomic<std::uint64_t> g_lp_calls{0};
}

std::uint64_t lp_call_count() { return g_lp_calls.load(std::memory_order_relaxed); }

namespace detail {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Dense tableau. Row i holds B^-1 A | B^-1 b; `obj` holds the reduced
// costs c_j - c_B B^-1 A_j and, in the last slot, minus the objective.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), width_(cols + 1), cells_(rows * width_), obj_(width_), basis_(rows, kNone) {}

  Rational& cell(std::size_t r, std::size_t k) { return cells_[r * width_ + k]; }
  Rational& rhs(std::size_t r) { return cells_[r * width_ + cols_]; }
  Rational& obj(std::size_t k) { return obj_[k]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t& basis(std::size_t r) { return basis_[r]; }

  void pivot(std::size_t r, std::size_t k) {
    Rational* prow = &cells_[r * width_];
    const Rational inv = 1 / prow[k];
    nz_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (sgn(prow[j]) != 0) {
        prow[j] *= inv;
        nz_.push_back(j);
      }
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      eliminate(&cells_[i * width_], prow, k);
    }
    eliminate(obj_.data(), prow, k);
    basis_[r] = k;
  }

  // Bland: smallest entering index, ties in the ratio test broken by the
  // smallest basic variable index.
  std::size_t leaving_row(std::size_t k) {
    std::size_t best = kNone;
    Rational best_ratio;
    Rational ratio;
    for (std::size_t i = 0; i < rows_; ++i) {
      const Rational& a = cell(i, k);
      if (sgn(a) <= 0) continue;
      mpq_div(ratio.get_mpq_t(), rhs(i).get_mpq_t(), a.get_mpq_t());
      if (best == kNone) {
        best = i;
        best_ratio = ratio;
        continue;
      }
      const int c = cmp(ratio, best_ratio);
      if (c < 0 || (c == 0 && basis_[i] < basis_[best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  std::size_t entering_column(std::size_t limit) const {
    for (std::size_t k = 0; k < limit; ++k) {
      if (sgn(obj_[k]) > 0) return k;
    }
    return kNone;
  }

 private:
  void eliminate(Rational* row, const Rational* prow, std::size_t k) {
    if (sgn(row[k]) == 0) return;
    factor_ = row[k];
    for (std::size_t j : nz_) {
      mpq_mul(tmp_.get_mpq_t(), factor_.get_mpq_t(), prow[j].get_mpq_t());
      mpq_sub(row[j].get_mpq_t(), row[j].get_mpq_t(), tmp_.get_mpq_t());
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::size_t width_;
  std::vector<Rational> cells_;
  std::vector<Rational> obj_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nz_;
  Rational factor_;
  Rational tmp_;
};

enum class Phase { optimal, unbounded };

Phase run(Tableau& t, std::size_t allowed_cols) {
  for (;;) {
    const std::size_t k = t.entering_column(allowed_cols);
    if (k == kNone) return Phase::optimal;
    const std::size_t r = t.leaving_row(k);
    if (r == kNone) return Phase::unbounded;
    t.pivot(r, k);
  }
}

}  // namespace

SimplexResult solve_standard(StandardForm lp) {
  g_lp_calls.fetch_add(1, std::memory_order_relaxed);
  const std::size_t m = lp.rows;
  const std::size_t n = lp.cols;
  SimplexResult result;

  // Phase 1: artificial basis, maximize -sum(artificials).
  Tableau p1(m, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = sgn(lp.b[i]) < 0;
    for (std::size_t k = 0; k < n; ++k) {
      const Rational& a = lp.a[i * n + k];
      if (sgn(a) != 0) p1.cell(i, k) = flip ? Rational(-a) : a;
    }
    p1.cell(i, n + i) = 1;
    p1.rhs(i) = flip ? Rational(-lp.b[i]) : lp.b[i];
    p1.basis(i) = n + i;
    for (std::size_t k = 0; k < n; ++k) p1.obj(k) += p1.cell(i, k);
    p1.obj(n + m) += p1.rhs(i);
  }
  run(p1, n + m);
  if (sgn(p1.obj(n + m)) != 0) return result;  // infeasible

  // Drive remaining artificials out of the basis; rows where that is
  // impossible are linearly dependent and get dropped.
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m; ++i) {
    if (p1.basis(i) >= n) {
      std::size_t k = 0;
      while (k < n && sgn(p1.cell(i, k)) == 0) ++k;
      if (k == n) continue;
      p1.pivot(i, k);
    }
    keep.push_back(i);
  }

  // Phase 2 on the compacted tableau (artificial columns removed).
  Tableau p2(keep.size(), n);
  for (std::size_t r = 0; r < keep.size(); ++r) {
    const std::size_t i = keep[r];
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(p1.cell(i, k)) != 0) p2.cell(r, k) = p1.cell(i, k);
    }
    p2.rhs(r) = p1.rhs(i);
    p2.basis(r) = p1.basis(i);
  }
  for (std::size_t k = 0; k < n; ++k) p2.obj(k) = lp.c[k];
  for (std::size_t r = 0; r < p2.rows(); ++r) {
    const Rational& cb = lp.c[p2.basis(r)];
    if (sgn(cb) == 0) continue;
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(p2.cell(r, k)) != 0) p2.obj(k) -= cb * p2.cell(r, k);
    }
    p2.obj(n) -= cb * p2.rhs(r);
  }
  if (run(p2, n) == Phase::unbounded) {
    result.status = LpStatus::unbounded;
    return result;
  }
  result.status = LpStatus::optimal;
  result.y.assign(n, Rational(0));
  for (std::size_t r = 0; r < p2.rows(); ++r) result.y[p2.basis(r)] = p2.rhs(r);
  result.value = -p2.obj(n);
  return result;
}

}  // namespace detail
}  // namespace tropic::geometry
