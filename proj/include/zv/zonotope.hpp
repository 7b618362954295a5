#pragma once

// Zonotopes Z = center + sum_i conv{0, a_i} with exact operations: support
// function, vertex enumeration, membership, containment with separating
// certificates, and p-norm maximization over the body.
//
// Vertices come from the dual central arrangement { x : a_i . x = 0 }: the
// witness direction w of each cell has a_i . w != 0 for every generator, so
// center + sum over { i : a_i . w > 0 } a_i is the unique maximizer of w over
// Z and hence an extreme point; every vertex arises this way because the
// arrangement fan refines the normal fan of Z.

#include <zv/arrangement.hpp>

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace zv {

class Zonotope {
public:
  Zonotope(const RMatrix& generators, RVector center)
      : dim_(generators.rows()), center_(std::move(center)) {
    if (dim_ == 0) throw input_error("Zonotope: ambient dimension must be >= 1");
    if (center_.size() != dim_) throw input_error("Zonotope: center dimension mismatch");
    for (std::size_t j = 0; j < generators.cols(); ++j) {
      RVector col = generators.col(j);
      if (!col.is_zero()) cols_.push_back(std::move(col));
    }
  }
  explicit Zonotope(const RMatrix& generators) : Zonotope(generators, RVector(generators.rows())) {}

  static Zonotope from_columns(std::size_t d, const std::vector<RVector>& cols,
                               RVector center = RVector()) {
    RMatrix g(d, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != d) throw input_error("Zonotope: generator dimension mismatch");
      for (std::size_t i = 0; i < d; ++i) g(i, j) = cols[j][i];
    }
    if (center.size() == 0) center = RVector(d);
    return Zonotope(g, std::move(center));
  }

  std::size_t dim() const { return dim_; }
  std::size_t generator_count() const { return cols_.size(); }
  const RVector& generator(std::size_t j) const { return cols_.at(j); }
  const RVector& center() const { return center_; }

  RMatrix generators() const {
    RMatrix g(dim_, cols_.size());
    for (std::size_t j = 0; j < cols_.size(); ++j)
      for (std::size_t i = 0; i < dim_; ++i) g(i, j) = cols_[j][i];
    return g;
  }

private:
  std::size_t dim_;
  std::vector<RVector> cols_;
  RVector center_;
};

// Support function with an attaining point: value = center.v + sum max(0, a_i.v).
inline std::pair<Rational, RVector> support(const Zonotope& z, const RVector& v) {
  if (v.size() != z.dim()) throw input_error("support: direction dimension mismatch");
  Rational value = dot(z.center(), v);
  RVector arg = z.center();
  for (std::size_t j = 0; j < z.generator_count(); ++j) {
    Rational d = dot(z.generator(j), v);
    if (d.sign() > 0) {
      value += d;
      arg += z.generator(j);
    }
  }
  return {std::move(value), std::move(arg)};
}

// Exact vertex set, deduplicated, sorted lexicographically.
inline std::vector<RVector> vertices(const Zonotope& z) {
  if (z.generator_count() == 0) return {z.center()};
  std::vector<Hyperplane> hs;
  for (std::size_t j = 0; j < z.generator_count(); ++j)
    hs.push_back({z.generator(j), Rational(0)});
  HyperplaneArrangement arr(std::move(hs), z.dim());
  std::vector<RVector> out;
  for (const Cell& cell : enumerate_cells(arr)) {
    RVector p = z.center();
    for (std::size_t j = 0; j < z.generator_count(); ++j) {
      auto [ci, orient] = arr.index_map()[j];
      if (orient * cell.signs[ci] > 0) p += z.generator(j);
    }
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {

// Membership as a feasibility LP over lambda in [0,1]^n with
// G lambda = x - center.  Rows interleave per index: (lambda_i <= 1,
// -lambda_i <= 0) for each i, then (G_j lambda <= rhs_j, -G_j <= -rhs_j)
// for each output coordinate j.
inline Polyhedron membership_polyhedron(const Zonotope& z, const RVector& x) {
  const std::size_t n = z.generator_count(), d = z.dim();
  Polyhedron p(n);
  for (std::size_t i = 0; i < n; ++i) {
    RVector e(n);
    e[i] = Rational(1);
    p.add_row(e, Rational(1));
    e[i] = Rational(-1);
    p.add_row(e, Rational(0));
  }
  for (std::size_t j = 0; j < d; ++j) {
    RVector row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = z.generator(i)[j];
    Rational rhs = x[j] - z.center()[j];
    p.add_row(row, rhs);
    p.add_row(-row, -rhs);
  }
  return p;
}

// Separating direction recovered from the Farkas certificate of an
// infeasible membership LP: w = t - s over the two equality-row blocks.
inline RVector separator_direction(const Zonotope& z, const RVector& farkas) {
  const std::size_t n = z.generator_count(), d = z.dim();
  RVector w(d);
  for (std::size_t j = 0; j < d; ++j) w[j] = farkas[2 * n + 2 * j + 1] - farkas[2 * n + 2 * j];
  return w;
}

} // namespace detail

inline bool membership(const Zonotope& z, const RVector& x) {
  if (x.size() != z.dim()) throw input_error("membership: point dimension mismatch");
  return lp_feasible_point(detail::membership_polyhedron(z, x)).status == LpStatus::Optimal;
}

struct ContainmentVerdict {
  bool contained = true;
  std::optional<RVector> witness;  // inner vertex outside the outer zonotope
  std::optional<std::pair<RVector, Rational>> separator;  // (direction w, offset b):
                                                          // w.witness > b, sup_outer w < b
};

inline ContainmentVerdict containment(const Zonotope& inner, const Zonotope& outer) {
  if (inner.dim() != outer.dim()) throw input_error("containment: dimension mismatch");
  for (const RVector& v : vertices(inner)) {
    LPResult r = lp_feasible_point(detail::membership_polyhedron(outer, v));
    if (r.status == LpStatus::Optimal) continue;
    if (r.status != LpStatus::Infeasible) throw internal_error("containment: membership probe");
    RVector w = detail::separator_direction(outer, r.farkas);
    Rational sup = support(outer, w).first;
    Rational at = dot(w, v);
    if (!(sup < at)) throw internal_error("containment: separator does not separate");
    ContainmentVerdict verdict;
    verdict.contained = false;
    verdict.witness = v;
    verdict.separator = std::make_pair(std::move(w), (sup + at) / Rational(2));
    return verdict;
  }
  return {};
}

struct PNorm {
  enum class Kind : std::uint8_t { One, Two, Inf, General };
  Kind kind = Kind::One;
  Rational q;  // General only

  static PNorm one() { return {Kind::One, Rational(1)}; }
  static PNorm two() { return {Kind::Two, Rational(2)}; }
  static PNorm inf() { return {Kind::Inf, Rational()}; }
  static PNorm general(const Rational& q) {
    if (q.sign() <= 0) throw input_error("p-norm: exponent must be positive");
    if (q == Rational(1)) return one();
    if (q == Rational(2)) return two();
    return {Kind::General, q};
  }
  static PNorm parse(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF") return inf();
    return general(Rational::parse(s));
  }
};

struct NormMaxResult {
  RVector argmax;          // attaining vertex
  Rational value;          // exact norm for p = 1 and p = inf
  Rational value_squared;  // exact squared norm for p = 2
  double approx = 0;       // floating image of the maximum, every kind
  bool exact = true;       // false only for General
  double tolerance = 0;    // relative comparison tolerance (General: 1e-25)
};

// Maximum of the p-norm over z, attained at a vertex (the norm is convex for
// p >= 1).  p = 1 and p = inf are exact rationals, p = 2 is compared on exact
// squared values, and other exponents are evaluated with 128-bit floats
// (documented relative tolerance 1e-25).  For exponents in (0,1) the reported
// value is the maximum over the vertex set.
inline NormMaxResult lp_norm_max(const Zonotope& z, const PNorm& p) {
  std::vector<RVector> vs = vertices(z);
  NormMaxResult best;
  switch (p.kind) {
    case PNorm::Kind::One:
    case PNorm::Kind::Inf: {
      bool maxnorm = p.kind == PNorm::Kind::Inf;
      bool first = true;
      for (const RVector& v : vs) {
        Rational norm;
        for (std::size_t i = 0; i < v.size(); ++i)
          if (maxnorm)
            norm = max(norm, v[i].abs());
          else
            norm += v[i].abs();
        if (first || norm > best.value) {
          best.value = norm;
          best.argmax = v;
          first = false;
        }
      }
      best.approx = best.value.to_double();
      return best;
    }
    case PNorm::Kind::Two: {
      bool first = true;
      for (const RVector& v : vs) {
        Rational sq = dot(v, v);
        if (first || sq > best.value_squared) {
          best.value_squared = sq;
          best.argmax = v;
          first = false;
        }
      }
      best.approx = std::sqrt(best.value_squared.to_double());
      return best;
    }
    case PNorm::Kind::General:
      break;
  }
  mpfr_t acc, term, qq, iq, bestv;
  mpfr_inits2(128, acc, term, qq, iq, bestv, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(qq, p.q.raw().get_mpq_t(), MPFR_RNDN);
  mpfr_ui_div(iq, 1, qq, MPFR_RNDN);
  bool first = true;
  for (const RVector& v : vs) {
    mpfr_set_zero(acc, 1);
    for (std::size_t i = 0; i < v.size(); ++i) {
      Rational a = v[i].abs();
      if (a.is_zero()) continue;
      mpfr_set_q(term, a.raw().get_mpq_t(), MPFR_RNDN);
      mpfr_pow(term, term, qq, MPFR_RNDN);
      mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    mpfr_pow(acc, acc, iq, MPFR_RNDN);
    if (first || mpfr_cmp(acc, bestv) > 0) {
      mpfr_set(bestv, acc, MPFR_RNDN);
      best.argmax = v;
      first = false;
    }
  }
  best.approx = mpfr_get_d(bestv, MPFR_RNDN);
  best.exact = false;
  best.tolerance = 1e-25;
  mpfr_clears(acc, term, qq, iq, bestv, static_cast<mpfr_ptr>(nullptr));
  return best;
}

} // namespace zv
