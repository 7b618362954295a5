#pragma once

// H-representation { x : A x <= b }.  Pure data; emptiness and optimization
// questions are answered by the LP layer.

#include <zv/linalg.hpp>

#include <cstddef>
#include <utility>
#include <vector>

namespace zv {

struct Polyhedron {
  // One entry per row: (a, beta) encodes a . x <= beta.
  std::vector<std::pair<RVector, Rational>> rows;
  std::size_t dim = 0;

  Polyhedron() = default;
  explicit Polyhedron(std::size_t d) : dim(d) {}

  std::size_t row_count() const { return rows.size(); }

  void add_row(RVector a, Rational beta) {
    if (a.size() != dim) throw input_error("Polyhedron: row dimension mismatch");
    rows.emplace_back(std::move(a), std::move(beta));
  }

  // Closed membership test.
  bool contains(const RVector& x) const {
    if (x.size() != dim) throw input_error("Polyhedron: point dimension mismatch");
    for (const auto& [a, beta] : rows)
      if (dot(a, x) > beta) return false;
    return true;
  }

  // Strict membership: every inequality satisfied with slack.
  bool contains_strictly(const RVector& x) const {
    if (x.size() != dim) throw input_error("Polyhedron: point dimension mismatch");
    for (const auto& [a, beta] : rows)
      if (dot(a, x) >= beta) return false;
    return true;
  }

  // Whether d is a recession direction of the closed set.
  bool recedes(const RVector& d) const {
    for (const auto& [a, beta] : rows)
      if (dot(a, d).sign() > 0) return false;
    return true;
  }

  static Polyhedron intersect(const Polyhedron& p, const Polyhedron& q) {
    if (p.dim != q.dim) throw input_error("Polyhedron: intersect dimension mismatch");
    Polyhedron r = p;
    for (const auto& row : q.rows) r.rows.push_back(row);
    return r;
  }

  // Axis-aligned box [lo, hi]^d.
  static Polyhedron box(std::size_t d, const Rational& lo, const Rational& hi) {
    Polyhedron p(d);
    for (std::size_t i = 0; i < d; ++i) {
      RVector e(d), me(d);
      e[i] = Rational(1);
      me[i] = Rational(-1);
      p.add_row(e, hi);
      p.add_row(me, -lo);
    }
    return p;
  }
};

} // namespace zv
