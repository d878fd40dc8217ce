#include <algorithm>
#include <string>

#include "simplex.hpp"
#include "tropic/errors.hpp"
#include "tropic/geometry.hpp"

namespace tropic::geometry {

void ConstraintSystem::add_equality(Vector coeffs, Rational rhs) {
  equalities_.push_back({std::move(coeffs), std::move(rhs)});
}

void ConstraintSystem::add_inequality(Vector coeffs, Rational rhs) {
  inequalities_.push_back({std::move(coeffs), std::move(rhs)});
}

ConstraintSystem ConstraintSystem::intersect(const ConstraintSystem& other) const {
  if (other.dim_ != dim_) throw InputError("intersecting systems of different dimension");
  ConstraintSystem out = *this;
  out.equalities_.insert(out.equalities_.end(), other.equalities_.begin(), other.equalities_.end());
  out.inequalities_.insert(out.inequalities_.end(), other.inequalities_.begin(), other.inequalities_.end());
  return out;
}

bool ConstraintSystem::satisfied_by(const Vector& x) const {
  for (const auto& e : equalities_) {
    if (dot(e.coeffs, x) != e.rhs) return false;
  }
  for (const auto& c : inequalities_) {
    if (dot(c.coeffs, x) < c.rhs) return false;
  }
  return true;
}

void ConstraintSystem::validate() const {
  auto check = [this](const std::vector<LinearConstraint>& list, const char* kind) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].coeffs.size() != dim_) {
        throw InputError(std::string(kind) + " " + std::to_string(i) + " has " +
                         std::to_string(list[i].coeffs.size()) + " coefficients, expected " +
                         std::to_string(dim_));
      }
    }
  };
  check(equalities_, "equality");
  check(inequalities_, "inequality");
}

LpResult maximize(const ConstraintSystem& sys, const Vector& objective) {
  sys.validate();
  if (objective.size() != sys.dim()) throw InputError("objective has wrong dimension");
  const std::size_t d = sys.dim();
  const auto& eqs = sys.equalities();
  const auto& ineqs = sys.inequalities();

  // x = u - v with u, v >= 0; one surplus column per inequality.
  detail::StandardForm lp;
  lp.rows = eqs.size() + ineqs.size();
  lp.cols = 2 * d + ineqs.size();
  lp.a.assign(lp.rows * lp.cols, Rational(0));
  lp.b.resize(lp.rows);
  lp.c.assign(lp.cols, Rational(0));
  std::size_t row = 0;
  auto put = [&](const LinearConstraint& con) {
    for (std::size_t k = 0; k < d; ++k) {
      if (sgn(con.coeffs[k]) == 0) continue;
      lp.at(row, k) = con.coeffs[k];
      lp.at(row, d + k) = -con.coeffs[k];
    }
    lp.b[row] = con.rhs;
  };
  for (const auto& e : eqs) {
    put(e);
    ++row;
  }
  for (std::size_t i = 0; i < ineqs.size(); ++i) {
    put(ineqs[i]);
    lp.at(row, 2 * d + i) = -1;
    ++row;
  }
  for (std::size_t k = 0; k < d; ++k) {
    lp.c[k] = objective[k];
    lp.c[d + k] = -objective[k];
  }

  const auto solved = detail::solve_standard(std::move(lp));
  LpResult out;
  out.status = solved.status;
  if (solved.status == LpStatus::optimal) {
    out.point.resize(d);
    for (std::size_t k = 0; k < d; ++k) out.point[k] = solved.y[k] - solved.y[d + k];
    out.value = solved.value;
  }
  return out;
}

std::optional<Vector> feasible(const ConstraintSystem& sys) {
  auto res = maximize(sys, Vector(sys.dim(), Rational(0)));
  if (res.status != LpStatus::optimal) return std::nullopt;
  return std::move(res.point);
}

std::optional<Vector> strictly_feasible(const ConstraintSystem& sys) {
  sys.validate();
  if (sys.inequalities().empty()) return feasible(sys);
  const std::size_t d = sys.dim();
  // Variables (x, t): a.x - t >= r for every inequality, t <= 1, max t.
  ConstraintSystem lifted(d + 1);
  for (const auto& e : sys.equalities()) {
    Vector a = e.coeffs;
    a.emplace_back(0);
    lifted.add_equality(std::move(a), e.rhs);
  }
  for (const auto& c : sys.inequalities()) {
    Vector a = c.coeffs;
    a.emplace_back(-1);
    lifted.add_inequality(std::move(a), c.rhs);
  }
  Vector cap(d + 1, Rational(0));
  cap[d] = -1;
  lifted.add_inequality(std::move(cap), Rational(-1));
  Vector objective(d + 1, Rational(0));
  objective[d] = 1;
  auto res = maximize(lifted, objective);
  if (res.status != LpStatus::optimal || sgn(res.value) <= 0) return std::nullopt;
  res.point.pop_back();
  return std::move(res.point);
}

std::size_t rank(const std::vector<Vector>& rows, std::size_t dim) {
  std::vector<Vector> m = rows;
  std::size_t r = 0;
  for (std::size_t col = 0; col < dim && r < m.size(); ++col) {
    std::size_t p = r;
    while (p < m.size() && sgn(m[p][col]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < m.size(); ++i) {
      if (sgn(m[i][col]) == 0) continue;
      const Rational f = m[i][col] / m[r][col];
      for (std::size_t k = col; k < dim; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

std::vector<Vector> nullspace_basis(const std::vector<Vector>& rows, std::size_t dim) {
  // Reduced row echelon form, then one basis vector per free column.
  std::vector<Vector> m = rows;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < dim && r < m.size(); ++col) {
    std::size_t p = r;
    while (p < m.size() && sgn(m[p][col]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    const Rational inv = 1 / m[r][col];
    for (std::size_t k = 0; k < dim; ++k) m[r][k] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || sgn(m[i][col]) == 0) continue;
      const Rational f = m[i][col];
      for (std::size_t k = 0; k < dim; ++k) m[i][k] -= f * m[r][k];
    }
    pivots.push_back(col);
    ++r;
  }
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < dim; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    Vector v(dim, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace {

std::vector<Vector> equality_rows(const ConstraintSystem& sys) {
  std::vector<Vector> rows;
  for (const auto& e : sys.equalities()) rows.push_back(e.coeffs);
  return rows;
}

}  // namespace

std::optional<int> affine_dimension(const ConstraintSystem& sys) {
  const int d = static_cast<int>(sys.dim());
  if (strictly_feasible(sys)) return d - static_cast<int>(rank(equality_rows(sys), sys.dim()));
  if (!feasible(sys)) return std::nullopt;

  // Some inequalities are implicit equalities. An inequality is implicit
  // iff its maximum over the set equals its right-hand side; any optimum
  // found on the way rules out every inequality it leaves slack.
  const auto& ineqs = sys.inequalities();
  std::vector<char> decided(ineqs.size(), 0);
  std::vector<Vector> rows = equality_rows(sys);
  for (std::size_t i = 0; i < ineqs.size(); ++i) {
    if (decided[i]) continue;
    const auto res = maximize(sys, ineqs[i].coeffs);
    if (res.status == LpStatus::optimal && res.value == ineqs[i].rhs) {
      rows.push_back(ineqs[i].coeffs);
      decided[i] = 1;
      continue;
    }
    decided[i] = 1;
    if (res.status == LpStatus::optimal) {
      for (std::size_t j = i + 1; j < ineqs.size(); ++j) {
        if (!decided[j] && dot(ineqs[j].coeffs, res.point) > ineqs[j].rhs) decided[j] = 1;
      }
    }
  }
  return d - static_cast<int>(rank(rows, sys.dim()));
}

RecessionProfile recession_profile(const ConstraintSystem& sys) {
  if (!feasible(sys)) throw EmptyPolyhedron();
  const std::size_t d = sys.dim();
  std::vector<Vector> all = equality_rows(sys);
  for (const auto& c : sys.inequalities()) all.push_back(c.coeffs);
  RecessionProfile profile;
  profile.lineality_dim = static_cast<int>(d - rank(all, d));
  if (sys.inequalities().empty()) return profile;

  // Recession cone C = {v : A_eq v = 0, A_in v >= 0}. C equals the
  // lineality space iff sum_i a_i.v vanishes on C (capped by a_i.v <= 1).
  ConstraintSystem cone(d);
  for (const auto& e : sys.equalities()) cone.add_equality(e.coeffs, Rational(0));
  Vector total(d, Rational(0));
  for (const auto& c : sys.inequalities()) {
    cone.add_inequality(c.coeffs, Rational(0));
    Vector neg(d);
    for (std::size_t k = 0; k < d; ++k) neg[k] = -c.coeffs[k];
    cone.add_inequality(std::move(neg), Rational(-1));
    for (std::size_t k = 0; k < d; ++k) total[k] += c.coeffs[k];
  }
  const auto res = maximize(cone, total);
  profile.pointed_part_bounded = res.status == LpStatus::optimal && sgn(res.value) == 0;
  return profile;
}

int euler_characteristic(const ConstraintSystem& sys) {
  const auto profile = recession_profile(sys);
  if (!profile.pointed_part_bounded) return 0;
  return profile.lineality_dim % 2 == 0 ? 1 : -1;
}

bool contains(const ConstraintSystem& outer, const ConstraintSystem& inner) {
  if (outer.dim() != inner.dim()) throw InputError("containment between different dimensions");
  auto min_over_inner = [&inner](const Vector& a) {
    Vector neg(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) neg[k] = -a[k];
    return maximize(inner, neg);
  };
  for (const auto& c : outer.inequalities()) {
    const auto res = min_over_inner(c.coeffs);
    if (res.status == LpStatus::infeasible) throw EmptyPolyhedron();
    if (res.status == LpStatus::unbounded || -res.value < c.rhs) return false;
  }
  for (const auto& e : outer.equalities()) {
    const auto lo = min_over_inner(e.coeffs);
    if (lo.status == LpStatus::infeasible) throw EmptyPolyhedron();
    if (lo.status == LpStatus::unbounded || -lo.value != e.rhs) return false;
    const auto hi = maximize(inner, e.coeffs);
    if (hi.status == LpStatus::unbounded || hi.value != e.rhs) return false;
  }
  return true;
}

}  // namespace tropic::geometry
