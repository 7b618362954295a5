#pragma once

// Input-convex network recognition, Newton-polytope extended formulations,
// and the polyhedral L1/Linf Lipschitz algorithms.
//
// A bias-free input-convex network computes a convex positively homogeneous
// CPWL function f, and f <-> Newt(f) turns pointwise sums into Minkowski
// sums and max(., 0) into conv(. u {0}).  newton_polytope_extended follows
// that recursion bottom-up: one [0,1] multiplier per use of a first-layer
// neuron (variable splitting for the Minkowski sums) and one scale variable
// per second-hidden-layer neuron (the 0-hull of a block scales its
// right-hand side).  The projection onto the first input_dim() coordinates
// of the result is exactly Newt(f); biases never enter the construction,
// which is the "strip biases first" normalization (they do not change the
// Lipschitz constant).
//
// L_p(f) = max over Newt(f) of the dual norm, so L1 probes +-e_i (2d LPs)
// and Linf probes all sign patterns (2^d LPs, capped at d <= 20).

#include <zv/errors.hpp>
#include <zv/linalg.hpp>
#include <zv/lp.hpp>
#include <zv/polyhedron.hpp>
#include <zv/relu_network.hpp>
#include <zv/zonotope.hpp>

#include <cstddef>
#include <utility>
#include <vector>

namespace zv {

struct ExtendedPolytope {
  Polyhedron q;         // H-representation in R^(dim + m)
  std::size_t dim = 0;  // the projection keeps coordinates 0 .. dim-1

  RVector project(const RVector& y) const {
    if (y.size() < dim) throw input_error("ExtendedPolytope: point shorter than projection");
    RVector x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = y[i];
    return x;
  }
};

// True iff every weight past the first layer (output weights included) is
// nonnegative; first-layer weights and all biases are unrestricted.
inline bool is_icnn(const ReluNetwork& net) {
  for (std::size_t l = 1; l < net.hidden_layer_count(); ++l) {
    const RMatrix& w = net.layer(l).weights;
    for (std::size_t i = 0; i < w.rows(); ++i)
      for (std::size_t j = 0; j < w.cols(); ++j)
        if (w(i, j).sign() < 0) return false;
  }
  const RVector& c = net.output_weights();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i].sign() < 0) return false;
  return true;
}

namespace detail {

// Appends the pair of inequalities encoding row . y == rhs.
inline void add_equality(Polyhedron& q, const RVector& row, const Rational& rhs) {
  RVector neg = -row;
  q.add_row(RVector(row), rhs);
  q.add_row(std::move(neg), -rhs);
}

} // namespace detail

inline ExtendedPolytope newton_polytope_extended(const ReluNetwork& net) {
  if (!is_icnn(net)) throw input_error("newton_polytope_extended: network is not input-convex");
  if (net.hidden_layer_count() > 2)
    throw input_error("newton_polytope_extended: at most two hidden layers supported");
  std::size_t d = net.input_dim();
  const RMatrix& w = net.layer(0).weights;  // n1 x d
  std::size_t n1 = w.rows();
  const RVector& c = net.output_weights();

  if (net.hidden_layer_count() == 1) {
    // Newt(f) = sum_i c_i conv{0, w_i}; y = (g, t) with g = sum_i c_i t_i w_i
    // and t in [0,1]^n1.
    Polyhedron q(d + n1);
    for (std::size_t r = 0; r < d; ++r) {
      RVector row(d + n1);
      row[r] = Rational(1);
      for (std::size_t i = 0; i < n1; ++i) row[d + i] = -(c[i] * w(i, r));
      detail::add_equality(q, row, Rational());
    }
    for (std::size_t i = 0; i < n1; ++i) {
      RVector up(d + n1), down(d + n1);
      up[d + i] = Rational(1);
      down[d + i] = Rational(-1);
      q.add_row(std::move(up), Rational(1));
      q.add_row(std::move(down), Rational());
    }
    return {std::move(q), d};
  }

  // Two hidden layers: neuron j's block is conv(Z_j u {0}) for the zonotope
  // Z_j = sum_i u_ji conv{0, w_i}, realized as 0 <= tau_ji <= lambda_j <= 1
  // (tau is the split per-edge multiplier, lambda_j scales the block), and
  // Newt(f) = sum_j c_j * block_j.
  const RMatrix& u = net.layer(1).weights;  // n2 x n1
  std::size_t n2 = u.rows();
  std::size_t m = n2 * n1 + n2;
  auto tau = [&](std::size_t j, std::size_t i) { return d + j * n1 + i; };
  auto lambda = [&](std::size_t j) { return d + n2 * n1 + j; };

  Polyhedron q(d + m);
  for (std::size_t r = 0; r < d; ++r) {
    RVector row(d + m);
    row[r] = Rational(1);
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t i = 0; i < n1; ++i) row[tau(j, i)] = -(c[j] * u(j, i) * w(i, r));
    detail::add_equality(q, row, Rational());
  }
  for (std::size_t j = 0; j < n2; ++j) {
    for (std::size_t i = 0; i < n1; ++i) {
      RVector cap(d + m), nonneg(d + m);
      cap[tau(j, i)] = Rational(1);
      cap[lambda(j)] = Rational(-1);
      nonneg[tau(j, i)] = Rational(-1);
      q.add_row(std::move(cap), Rational());
      q.add_row(std::move(nonneg), Rational());
    }
    RVector up(d + m), down(d + m);
    up[lambda(j)] = Rational(1);
    down[lambda(j)] = Rational(-1);
    q.add_row(std::move(up), Rational(1));
    q.add_row(std::move(down), Rational());
  }
  return {std::move(q), d};
}

// Exact L_p Lipschitz constant of an input-convex network, p in {1, inf},
// via 2d (p = 1) or 2^d (p = inf) support LPs over the extended formulation.
inline Rational icnn_lipschitz(const ReluNetwork& net, PNorm p) {
  if (!is_icnn(net)) throw input_error("icnn_lipschitz: network is not input-convex");
  if (p.kind != PNorm::Kind::One && p.kind != PNorm::Kind::Inf)
    throw input_error("icnn_lipschitz: only p in {1, inf} is supported");
  std::size_t d = net.input_dim();
  if (p.kind == PNorm::Kind::Inf && d > 20)
    throw resource_error("icnn_lipschitz: p = inf takes 2^d LPs, input dimension capped at 20");

  ExtendedPolytope ext = newton_polytope_extended(net);
  std::vector<RVector> probes;
  if (p.kind == PNorm::Kind::One) {
    // Dual norm is Linf: probe +-e_i.
    for (std::size_t i = 0; i < d; ++i) {
      RVector plus(ext.q.dim), minus(ext.q.dim);
      plus[i] = Rational(1);
      minus[i] = Rational(-1);
      probes.push_back(std::move(plus));
      probes.push_back(std::move(minus));
    }
  } else {
    // Dual norm is L1: probe every sign pattern.
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      RVector probe(ext.q.dim);
      for (std::size_t i = 0; i < d; ++i)
        probe[i] = (mask >> i & 1) ? Rational(1) : Rational(-1);
      probes.push_back(std::move(probe));
    }
  }

  // The probes are independent; max-reduction over values is
  // order-independent, so any evaluation schedule gives the same result.
  Rational best;
  bool have = false;
  for (const RVector& probe : probes) {
    LPResult r = lp_maximize(probe, ext.q);
    if (r.status != LpStatus::Optimal)
      throw internal_error("icnn_lipschitz: extended polytope must be bounded and nonempty");
    if (!have || r.value > best) {
      best = r.value;
      have = true;
    }
  }
  return best;
}

} // namespace zv
