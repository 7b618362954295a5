#pragma once

// Exact linear programming with certificates.
//
//   lp_maximize(c, P): max c.x over P = { x : A x <= b }, x free.
//
// Every outcome carries an exactly verified certificate:
//   Optimal    value, argmax point, and a dual vector y >= 0 with
//              A^T y = c and b.y = value (strong duality re-checked).
//   Unbounded  ray r with A r <= 0 and c.r > 0.
//   Infeasible Farkas vector y >= 0 with y^T A = 0 and y.b < 0.
//
// The solver runs tableau simplex with Bland's rule on the standard-form
// dual (min b.y : A^T y = c, y >= 0), which handles free primal variables
// without splitting.  Pivoting is fraction-free over integers with a common
// denominator, so arithmetic stays exact; certificates are reconstructed
// rationally and verified before being returned.  A verification failure
// throws internal_error, never produces a wrong verdict.

#include <zv/errors.hpp>
#include <zv/polyhedron.hpp>

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace zv {

enum class LpStatus : std::uint8_t { Optimal, Unbounded, Infeasible };

struct LPResult {
  LpStatus status = LpStatus::Infeasible;
  Rational value;  // Optimal only
  RVector point;   // Optimal: argmax
  RVector dual;    // Optimal: y >= 0, A^T y = c, b.y = value
  RVector ray;     // Unbounded: A r <= 0, c.r > 0
  RVector farkas;  // Infeasible: y >= 0, y^T A = 0, y.b < 0
};

namespace detail {

inline std::uint64_t& lp_counter() {
  thread_local std::uint64_t n = 0;
  return n;
}

// Integer tableau for the dual system.  Rows 0..d-1 are the equalities
// A^T y = c (row-scaled to integers, sign-normalized to rhs >= 0), row d is
// the phase-2 cost (min b.y), row d+1 the phase-1 cost (min sum of
// artificials).  Columns 0..m-1 are y, m..m+d-1 artificials, m+d the rhs.
// The true rational tableau is t_/den_ with den_ > 0.
class DualSimplex {
public:
  DualSimplex(const RVector& c, const Polyhedron& p)
      : m_(p.row_count()), d_(p.dim), rhs_(m_ + d_),
        t_(d_ + 2, std::vector<mpz_class>(m_ + d_ + 1, 0)), den_(1), basis_(d_),
        active_(d_, true), dsign_(d_, 1), rowscale_(d_) {
    for (std::size_t i = 0; i < d_; ++i) {
      mpz_class l = 1;
      for (std::size_t j = 0; j < m_; ++j) l = lcm(l, p.rows[j].first[i].den());
      l = lcm(l, c[i].den());
      rowscale_[i] = Rational(l);
      for (std::size_t j = 0; j < m_; ++j) t_[i][j] = scaled_int(p.rows[j].first[i], l);
      t_[i][rhs_] = scaled_int(c[i], l);
      if (sgn(t_[i][rhs_]) < 0) {
        dsign_[i] = -1;
        for (auto& z : t_[i]) z = -z;
      }
      t_[i][m_ + i] = 1;
      basis_[i] = m_ + i;
    }
    mpz_class lb = 1;
    for (std::size_t j = 0; j < m_; ++j) lb = lcm(lb, p.rows[j].second.den());
    objscale_ = Rational(lb);
    for (std::size_t j = 0; j < m_; ++j) t_[d_][j] = scaled_int(p.rows[j].second, lb);
    for (std::size_t j = 0; j <= rhs_; ++j) {
      mpz_class s = 0;
      for (std::size_t i = 0; i < d_; ++i) s += t_[i][j];
      t_[d_ + 1][j] = -s;
    }
    for (std::size_t i = 0; i < d_; ++i) t_[d_ + 1][m_ + i] = 0;
  }

  // Returns true when the dual system has a feasible basis.
  bool phase1() {
    if (!run(d_ + 1)) throw internal_error("lp: phase 1 unbounded");
    return sgn(t_[d_ + 1][rhs_]) == 0;
  }

  // Primal ray read off an infeasible phase 1 (A r <= 0, c.r > 0).
  RVector infeasibility_ray() const {
    RVector r(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      Rational nu = Rational(mpz_class(den_ - t_[d_ + 1][m_ + i]));
      r[i] = Rational(dsign_[i]) * nu * rowscale_[i];
    }
    return r;
  }

  // Pivots out (or drops as redundant) artificials left basic at zero.
  void cleanup_artificials() {
    for (std::size_t i = 0; i < d_; ++i) {
      if (!active_[i] || basis_[i] < m_) continue;
      std::size_t s = m_;
      for (std::size_t j = 0; j < m_; ++j)
        if (sgn(t_[i][j]) != 0) {
          s = j;
          break;
        }
      if (s == m_) {
        active_[i] = false;
        continue;
      }
      pivot(i, s);
    }
  }

  // Returns true on optimal, false when the dual objective is unbounded
  // below (primal infeasible).
  bool phase2() { return run(d_); }

  Rational objective_value() const {
    return -Rational(t_[d_][rhs_]) / (Rational(den_) * objscale_);
  }

  RVector dual_solution() const {
    RVector y(m_);
    for (std::size_t i = 0; i < d_; ++i)
      if (active_[i] && basis_[i] < m_) y[basis_[i]] = Rational(t_[i][rhs_]) / Rational(den_);
    return y;
  }

  // Primal argmax from the phase-2 simplex multipliers.
  RVector primal_point() const {
    RVector x(d_);
    Rational den(den_);
    for (std::size_t i = 0; i < d_; ++i) {
      Rational nu = -Rational(t_[d_][m_ + i]) / den;
      x[i] = Rational(dsign_[i]) * nu * rowscale_[i] / objscale_;
    }
    return x;
  }

  // Dual recession ray from an unbounded phase 2 (Farkas certificate).
  RVector dual_ray() const {
    RVector y(m_);
    y[ray_col_] = Rational(den_);
    for (std::size_t i = 0; i < d_; ++i)
      if (active_[i] && basis_[i] < m_) y[basis_[i]] = Rational(mpz_class(-t_[i][ray_col_]));
    return y;
  }

private:
  static mpz_class lcm(const mpz_class& a, const mpz_class& b) {
    mpz_class r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
  }
  static mpz_class scaled_int(const Rational& q, const mpz_class& l) {
    mpz_class s;
    mpz_divexact(s.get_mpz_t(), l.get_mpz_t(), q.den().get_mpz_t());
    return mpz_class(q.num() * s);
  }

  // Bland: entering = lowest-index y column with negative reduced cost,
  // leaving = lowest basic index among minimal ratios.  Returns false iff
  // the objective row obj is unbounded below.
  bool run(std::size_t obj) {
    for (;;) {
      std::size_t s = rhs_;
      for (std::size_t j = 0; j < m_; ++j)
        if (sgn(t_[obj][j]) < 0) {
          s = j;
          break;
        }
      if (s == rhs_) return true;
      std::size_t r = d_;
      for (std::size_t i = 0; i < d_; ++i) {
        if (!active_[i] || sgn(t_[i][s]) <= 0) continue;
        if (r == d_) {
          r = i;
          continue;
        }
        mpz_class lhs = t_[i][rhs_] * t_[r][s];
        mpz_class rv = t_[r][rhs_] * t_[i][s];
        int c = cmp(lhs, rv);
        if (c < 0 || (c == 0 && basis_[i] < basis_[r])) r = i;
      }
      if (r == d_) {
        ray_col_ = s;
        return false;
      }
      pivot(r, s);
    }
  }

  void pivot(std::size_t r, std::size_t s) {
    int sg = sgn(t_[r][s]);
    if (sg == 0) throw internal_error("lp: zero pivot");
    const mpz_class piv = t_[r][s];
    mpz_class v, fac;
    for (std::size_t i = 0; i < d_ + 2; ++i) {
      if (i == r) continue;
      auto& row = t_[i];
      const auto& prow = t_[r];
      fac = row[s];
      if (sgn(fac) == 0) {
        for (std::size_t j = 0; j <= rhs_; ++j) {
          mpz_mul(v.get_mpz_t(), row[j].get_mpz_t(), piv.get_mpz_t());
          if (sg < 0) mpz_neg(v.get_mpz_t(), v.get_mpz_t());
          mpz_divexact(row[j].get_mpz_t(), v.get_mpz_t(), den_.get_mpz_t());
        }
        continue;
      }
      for (std::size_t j = 0; j <= rhs_; ++j) {
        mpz_mul(v.get_mpz_t(), piv.get_mpz_t(), row[j].get_mpz_t());
        mpz_submul(v.get_mpz_t(), fac.get_mpz_t(), prow[j].get_mpz_t());
        if (sg < 0) mpz_neg(v.get_mpz_t(), v.get_mpz_t());
        mpz_divexact(row[j].get_mpz_t(), v.get_mpz_t(), den_.get_mpz_t());
      }
    }
    if (sg < 0)
      for (std::size_t j = 0; j <= rhs_; ++j) mpz_neg(t_[r][j].get_mpz_t(), t_[r][j].get_mpz_t());
    den_ = sg < 0 ? mpz_class(-piv) : piv;
    basis_[r] = s;
  }

  std::size_t m_, d_, rhs_;
  std::vector<std::vector<mpz_class>> t_;
  mpz_class den_;
  std::vector<std::size_t> basis_;
  std::vector<bool> active_;
  std::vector<int> dsign_;
  std::vector<Rational> rowscale_;
  Rational objscale_;
  std::size_t ray_col_ = 0;
};

inline void verify_optimal(const RVector& c, const Polyhedron& p, const LPResult& res) {
  if (!p.contains(res.point)) throw internal_error("lp: optimal point infeasible");
  if (dot(c, res.point) != res.value) throw internal_error("lp: optimal value mismatch");
  RVector aty(p.dim);
  Rational dualobj;
  for (std::size_t j = 0; j < p.row_count(); ++j) {
    if (res.dual[j].sign() < 0) throw internal_error("lp: negative dual");
    aty += res.dual[j] * p.rows[j].first;
    dualobj += res.dual[j] * p.rows[j].second;
  }
  if (aty != c) throw internal_error("lp: dual not complementary");
  if (dualobj != res.value) throw internal_error("lp: strong duality violated");
}

inline void verify_ray(const RVector& c, const Polyhedron& p, const RVector& ray) {
  if (dot(c, ray).sign() <= 0) throw internal_error("lp: ray does not improve");
  if (!p.recedes(ray)) throw internal_error("lp: ray leaves polyhedron");
}

inline void verify_farkas(const Polyhedron& p, const RVector& y) {
  RVector aty(p.dim);
  Rational yb;
  for (std::size_t j = 0; j < p.row_count(); ++j) {
    if (y[j].sign() < 0) throw internal_error("lp: negative farkas entry");
    aty += y[j] * p.rows[j].first;
    yb += y[j] * p.rows[j].second;
  }
  if (!aty.is_zero() || yb.sign() >= 0) throw internal_error("lp: farkas certificate invalid");
}

} // namespace detail

inline std::uint64_t lp_call_count() { return detail::lp_counter(); }
inline void lp_reset_call_count() { detail::lp_counter() = 0; }

inline LPResult lp_maximize(const RVector& c, const Polyhedron& p) {
  if (c.size() != p.dim) throw input_error("lp_maximize: objective dimension mismatch");
  ++detail::lp_counter();
  LPResult res;

  if (p.dim == 0) {
    for (std::size_t j = 0; j < p.row_count(); ++j)
      if (p.rows[j].second.sign() < 0) {
        res.status = LpStatus::Infeasible;
        res.farkas = RVector(p.row_count());
        res.farkas[j] = Rational(1);
        detail::verify_farkas(p, res.farkas);
        return res;
      }
    res.status = LpStatus::Optimal;
    res.point = RVector(0);
    res.dual = RVector(p.row_count());
    return res;
  }
  if (p.row_count() == 0) {
    if (c.is_zero()) {
      res.status = LpStatus::Optimal;
      res.point = RVector(p.dim);
      res.dual = RVector(0);
      return res;
    }
    res.status = LpStatus::Unbounded;
    res.ray = c;
    detail::verify_ray(c, p, res.ray);
    return res;
  }

  detail::DualSimplex dual(c, p);
  if (!dual.phase1()) {
    RVector ray = dual.infeasibility_ray();
    detail::verify_ray(c, p, ray);
    LPResult feas = lp_maximize(RVector(p.dim), p);
    if (feas.status == LpStatus::Infeasible) return feas;
    if (feas.status != LpStatus::Optimal) throw internal_error("lp: feasibility probe failed");
    res.status = LpStatus::Unbounded;
    res.ray = ray;
    return res;
  }
  dual.cleanup_artificials();
  if (!dual.phase2()) {
    res.status = LpStatus::Infeasible;
    res.farkas = dual.dual_ray();
    detail::verify_farkas(p, res.farkas);
    return res;
  }
  res.status = LpStatus::Optimal;
  res.point = dual.primal_point();
  res.dual = dual.dual_solution();
  res.value = dual.objective_value();
  detail::verify_optimal(c, p, res);
  return res;
}

// Feasibility probe; Optimal status means P is nonempty and res.point lies
// in it.
inline LPResult lp_feasible_point(const Polyhedron& p) {
  return lp_maximize(RVector(p.dim), p);
}

// Max-min-slack interior point: maximizes t <= cap subject to
// a.x + t <= beta for every row, in dimension dim+1 (the last coordinate is
// t).  t > 0 at the optimum certifies a strictly interior point.
inline LPResult lp_interior_point(const Polyhedron& p, const Rational& cap = Rational(1)) {
  Polyhedron q(p.dim + 1);
  for (const auto& [a, beta] : p.rows) {
    RVector row(p.dim + 1);
    for (std::size_t i = 0; i < p.dim; ++i) row[i] = a[i];
    row[p.dim] = Rational(1);
    q.add_row(std::move(row), beta);
  }
  RVector tcap(p.dim + 1);
  tcap[p.dim] = Rational(1);
  q.add_row(tcap, cap);
  RVector obj(p.dim + 1);
  obj[p.dim] = Rational(1);
  return lp_maximize(obj, q);
}

} // namespace zv
