#pragma once

// Decision and optimization queries on 2-/3-layer networks: positivity,
// surjectivity, zero-function check, maximum over a polyhedron, input/output
// verification against an interval, and exact Lipschitz constants.  Every
// query reduces to independent LPs over the linear pieces; results are merged
// with an order-independent tie-break (larger value, then lexicographically
// smaller argmax), and every returned witness is re-verified by exact forward
// evaluation before it leaves this module.

#include <zv/relu_network.hpp>

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace zv {

// Shared outcome record; field use depends on the query.
//   positivity            holds iff sup f > 0; witness has f(witness) > 0,
//                         value = f(witness), or value = max f when bounded
//   surjectivity          witness / second_witness: f'(x) > 0 resp. < 0
//   zero_function_check   on failure, witness has value = f(witness) != 0
//   max_over_polyhedron   status Optimal/Unbounded/Infeasible; when Optimal,
//                         value = max and witness = lex-smallest argmax found
//   verify_io             witness = counterexample in P, value = f(witness);
//                         status = Infeasible flags the vacuous empty-P case
struct VerifyOutcome {
  bool holds = false;
  std::optional<RVector> witness;
  std::optional<RVector> second_witness;
  std::optional<Rational> value;
  std::optional<LpStatus> status;
};

namespace detail {

inline ReluNetwork negated(const ReluNetwork& net) {
  std::vector<HiddenLayer> layers;
  layers.reserve(net.hidden_layer_count());
  for (std::size_t i = 0; i < net.hidden_layer_count(); ++i) layers.push_back(net.layer(i));
  return ReluNetwork(std::move(layers), -net.output_weights(), -net.output_bias());
}

inline ReluNetwork bias_stripped(const ReluNetwork& net) {
  std::vector<HiddenLayer> layers;
  layers.reserve(net.hidden_layer_count());
  for (std::size_t i = 0; i < net.hidden_layer_count(); ++i)
    layers.push_back({net.layer(i).weights, RVector(net.layer(i).biases.size())});
  return ReluNetwork(std::move(layers), net.output_weights(), Rational(0));
}

// Pieces of -f from the pieces of f (same regions, same arrangement).
inline std::vector<LinearPiece> negated_pieces(std::vector<LinearPiece> pieces) {
  for (LinearPiece& p : pieces) {
    p.gradient = -p.gradient;
    p.offset = -p.offset;
  }
  return pieces;
}

// Result of maximizing f over the intersection of its pieces with P.
struct PieceMax {
  LpStatus status = LpStatus::Infeasible;  // Infeasible until some piece meets P
  Rational value;                          // Optimal: the maximum of f
  RVector argmax;                          // Optimal: lex-smallest among ties
  RVector start;                           // Unbounded: point of the unbounded piece
  RVector ray;                             // Unbounded: recession direction
  Rational start_value;                    // Unbounded: f(start)
  Rational growth;                         // Unbounded: gradient . ray > 0
};

inline PieceMax maximize_pieces(const std::vector<LinearPiece>& pieces, const Polyhedron& p) {
  PieceMax best;
  for (const LinearPiece& piece : pieces) {
    Polyhedron q = Polyhedron::intersect(piece.region, p);
    LPResult r = lp_maximize(piece.gradient, q);
    if (r.status == LpStatus::Infeasible) continue;
    if (r.status == LpStatus::Unbounded) {
      LPResult feas = lp_feasible_point(q);
      if (feas.status != LpStatus::Optimal)
        throw internal_error("maximize_pieces: unbounded piece without feasible point");
      best.status = LpStatus::Unbounded;
      best.start = std::move(feas.point);
      best.ray = std::move(r.ray);
      best.start_value = dot(piece.gradient, best.start) + piece.offset;
      best.growth = dot(piece.gradient, best.ray);
      if (best.growth.sign() <= 0)
        throw internal_error("maximize_pieces: ray does not increase the objective");
      return best;  // first unbounded piece in enumeration order
    }
    Rational v = r.value + piece.offset;
    if (best.status != LpStatus::Optimal || v > best.value ||
        (v == best.value && r.point < best.argmax)) {
      best.status = LpStatus::Optimal;
      best.value = std::move(v);
      best.argmax = std::move(r.point);
    }
  }
  return best;
}

// Rational point of the unbounded piece whose value strictly exceeds target:
// f stays affine along the ray because recession keeps it inside the closure.
inline RVector walk_ray(const PieceMax& m, const Rational& target) {
  Rational t = max(Rational(1), (target + Rational(1) - m.start_value) / m.growth);
  RVector x = m.ray;
  x *= t;
  x += m.start;
  return x;
}

inline VerifyOutcome positivity_from_pieces(const ReluNetwork& net,
                                            const std::vector<LinearPiece>& pieces) {
  PieceMax m = maximize_pieces(pieces, Polyhedron(net.input_dim()));
  VerifyOutcome out;
  if (m.status == LpStatus::Infeasible)
    throw internal_error("positivity: pieces do not cover the space");
  if (m.status == LpStatus::Unbounded) {
    RVector x = walk_ray(m, Rational(0));
    Rational v = evaluate(net, x);
    if (v.sign() <= 0) throw internal_error("positivity: ray walk failed to certify");
    out.holds = true;
    out.witness = std::move(x);
    out.value = std::move(v);
    return out;
  }
  out.value = m.value;
  if (m.value.sign() > 0) {
    if (evaluate(net, m.argmax) != m.value)
      throw internal_error("positivity: witness disagrees with forward pass");
    out.holds = true;
    out.witness = std::move(m.argmax);
  }
  return out;
}

} // namespace detail

// Is there an x with f(x) > 0?  Strict: a supremum of exactly 0 fails.
inline VerifyOutcome positivity(const ReluNetwork& net) {
  return detail::positivity_from_pieces(net, linear_regions(net));
}

// f is surjective iff the bias-stripped f' takes a positive and a negative
// value; witness / second_witness carry the two points when found.
inline VerifyOutcome surjectivity(const ReluNetwork& net) {
  ReluNetwork stripped = detail::bias_stripped(net);
  std::vector<LinearPiece> pieces = linear_regions(stripped);
  VerifyOutcome pos = detail::positivity_from_pieces(stripped, pieces);
  ReluNetwork neg = detail::negated(stripped);
  VerifyOutcome negpos =
      detail::positivity_from_pieces(neg, detail::negated_pieces(std::move(pieces)));
  VerifyOutcome out;
  out.holds = pos.holds && negpos.holds;
  out.witness = std::move(pos.witness);
  out.second_witness = std::move(negpos.witness);
  return out;
}

// f == 0 identically?  Exact: checks sup f <= 0 and sup(-f) <= 0.
inline VerifyOutcome zero_function_check(const ReluNetwork& net) {
  std::vector<LinearPiece> pieces = linear_regions(net);
  VerifyOutcome pos = detail::positivity_from_pieces(net, pieces);
  VerifyOutcome out;
  if (pos.holds) {
    out.witness = std::move(pos.witness);
    out.value = std::move(pos.value);
    return out;
  }
  ReluNetwork neg = detail::negated(net);
  VerifyOutcome negpos =
      detail::positivity_from_pieces(neg, detail::negated_pieces(std::move(pieces)));
  if (negpos.holds) {
    Rational v = evaluate(net, *negpos.witness);
    if (v.sign() >= 0) throw internal_error("zero_function_check: negative witness mismatch");
    out.witness = std::move(negpos.witness);
    out.value = std::move(v);
    return out;
  }
  out.holds = true;
  return out;
}

// max_{x in P} f(x) with an argmax witness, or an explicit Unbounded /
// Infeasible status.  Ties between pieces resolve to the lexicographically
// smallest argmax, so the result is independent of evaluation order.
inline VerifyOutcome max_over_polyhedron(const ReluNetwork& net, const Polyhedron& p) {
  if (p.dim != net.input_dim()) throw input_error("max_over_polyhedron: dimension mismatch");
  detail::PieceMax m = detail::maximize_pieces(linear_regions(net), p);
  VerifyOutcome out;
  out.status = m.status;
  if (m.status != LpStatus::Optimal) return out;
  if (!p.contains(m.argmax) || evaluate(net, m.argmax) != m.value)
    throw internal_error("max_over_polyhedron: witness disagrees with forward pass");
  out.holds = true;
  out.value = std::move(m.value);
  out.witness = std::move(m.argmax);
  return out;
}

// Does f(P) lie inside [lo, hi]?  Missing bounds are infinite.  An empty P
// holds vacuously and is flagged by status = Infeasible.  On failure the
// witness is a point of P with f(witness) outside the interval.
inline VerifyOutcome verify_io(const ReluNetwork& net, const Polyhedron& p,
                               const std::optional<Rational>& lo,
                               const std::optional<Rational>& hi) {
  if (p.dim != net.input_dim()) throw input_error("verify_io: dimension mismatch");
  VerifyOutcome out;
  if (lp_feasible_point(p).status == LpStatus::Infeasible) {
    out.holds = true;
    out.status = LpStatus::Infeasible;
    return out;
  }
  std::vector<LinearPiece> pieces = linear_regions(net);

  // Point of P where g exceeds bound (g is net or its negation); the pieces
  // passed in must be the pieces of g.
  auto exceeds = [&p](const std::vector<LinearPiece>& pcs, const ReluNetwork& g,
                      const Rational& bound) -> std::optional<RVector> {
    detail::PieceMax m = detail::maximize_pieces(pcs, p);
    if (m.status == LpStatus::Infeasible)
      throw internal_error("verify_io: pieces do not cover the input polyhedron");
    if (m.status == LpStatus::Unbounded) {
      RVector x = detail::walk_ray(m, bound);
      if (!(evaluate(g, x) > bound) || !p.contains(x))
        throw internal_error("verify_io: ray walk failed to certify");
      return x;
    }
    if (m.value > bound) {
      if (evaluate(g, m.argmax) != m.value || !p.contains(m.argmax))
        throw internal_error("verify_io: witness disagrees with forward pass");
      return std::move(m.argmax);
    }
    return std::nullopt;
  };

  if (hi) {
    if (std::optional<RVector> x = exceeds(pieces, net, *hi)) {
      out.value = evaluate(net, *x);
      out.witness = std::move(x);
      return out;
    }
  }
  if (lo) {
    ReluNetwork neg = detail::negated(net);
    if (std::optional<RVector> x =
            exceeds(detail::negated_pieces(std::move(pieces)), neg, -*lo)) {
      out.value = evaluate(net, *x);
      out.witness = std::move(x);
      return out;
    }
  }
  out.holds = true;
  return out;
}

// Exact L_p Lipschitz constant: the maximum dual-norm value of any piece
// gradient.  p = 1 and p = inf are exact rationals; p = 2 is compared on
// exact squared values with approx = sqrt (same convention as NormMaxResult).
struct LipschitzResult {
  RVector gradient;        // witness, lexicographically smallest among maximizers
  Rational value;          // exact dual norm for p = 1 and p = inf
  Rational value_squared;  // exact squared dual norm for p = 2
  double approx = 0;
};

inline LipschitzResult lipschitz_exact(const ReluNetwork& net, const PNorm& p) {
  if (p.kind == PNorm::Kind::General)
    throw input_error("lipschitz_exact: p must be one of 1, 2, inf");
  std::vector<LinearPiece> pieces = linear_regions(net);
  LipschitzResult best;
  Rational best_measure;  // dual-norm value, squared for p = 2
  bool first = true;
  for (const LinearPiece& piece : pieces) {
    const RVector& g = piece.gradient;
    Rational measure;
    switch (p.kind) {
      case PNorm::Kind::One:  // dual norm: max |g_i|
        for (std::size_t i = 0; i < g.size(); ++i) measure = max(measure, g[i].abs());
        break;
      case PNorm::Kind::Inf:  // dual norm: sum |g_i|
        for (std::size_t i = 0; i < g.size(); ++i) measure += g[i].abs();
        break;
      default:  // Two; dual norm: euclidean, compared squared
        measure = dot(g, g);
        break;
    }
    if (first || measure > best_measure ||
        (measure == best_measure && g < best.gradient)) {
      best_measure = std::move(measure);
      best.gradient = g;
      first = false;
    }
  }
  if (p.kind == PNorm::Kind::Two) {
    best.value_squared = std::move(best_measure);
    best.approx = std::sqrt(best.value_squared.to_double());
  } else {
    best.value = std::move(best_measure);
    best.approx = best.value.to_double();
  }
  return best;
}

} // namespace zv
