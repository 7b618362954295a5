#pragma once

// ReLU networks with one or two hidden layers and a scalar output: exact
// evaluation, linear-region decomposition via hyperplane arrangements,
// homogenization (§ bias removal with an extra input), the max(0, f) lift,
// and the duality with pairs of zonotopes for bias-free 2-layer networks.

#include <zv/arrangement.hpp>
#include <zv/zonotope.hpp>

#include <cstddef>
#include <utility>
#include <vector>

namespace zv {

struct HiddenLayer {
  RMatrix weights;  // n_i x n_{i-1}
  RVector biases;   // n_i
};

class ReluNetwork {
public:
  ReluNetwork(std::vector<HiddenLayer> layers, RVector output_weights, Rational output_bias)
      : layers_(std::move(layers)), out_w_(std::move(output_weights)),
        out_b_(std::move(output_bias)) {
    if (layers_.empty()) throw input_error("ReluNetwork: at least one hidden layer required");
    input_dim_ = layers_.front().weights.cols();
    if (input_dim_ == 0) throw input_error("ReluNetwork: input dimension must be >= 1");
    std::size_t prev = input_dim_;
    for (const auto& l : layers_) {
      if (l.weights.cols() != prev) throw input_error("ReluNetwork: layer width mismatch");
      if (l.biases.size() != l.weights.rows())
        throw input_error("ReluNetwork: bias length mismatch");
      prev = l.weights.rows();
    }
    if (out_w_.size() != prev) throw input_error("ReluNetwork: output weight length mismatch");
  }

  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden_layer_count() const { return layers_.size(); }
  const HiddenLayer& layer(std::size_t i) const { return layers_.at(i); }
  const RVector& output_weights() const { return out_w_; }
  const Rational& output_bias() const { return out_b_; }

  bool bias_free() const {
    for (const auto& l : layers_)
      if (!l.biases.is_zero()) return false;
    return out_b_.is_zero();
  }

private:
  std::vector<HiddenLayer> layers_;
  RVector out_w_;
  Rational out_b_;
  std::size_t input_dim_;
};

inline Rational evaluate(const ReluNetwork& net, const RVector& x) {
  if (x.size() != net.input_dim()) throw input_error("evaluate: input dimension mismatch");
  RVector h = x;
  for (std::size_t l = 0; l < net.hidden_layer_count(); ++l) {
    RVector z = matvec(net.layer(l).weights, h);
    z += net.layer(l).biases;
    for (std::size_t i = 0; i < z.size(); ++i)
      if (z[i].sign() < 0) z[i] = Rational(0);
    h = std::move(z);
  }
  return dot(net.output_weights(), h) + net.output_bias();
}

struct LinearPiece {
  Polyhedron region;  // full-dimensional closure of an activation region
  RVector gradient;
  Rational offset;
  RVector witness;  // strictly interior point of region
};

namespace detail {

// Affine functionals feeding one ReLU layer: value_i(x) = grad_i . x + off_i.
struct AffineLayerInput {
  std::vector<RVector> grads;
  std::vector<Rational> offs;
};

// Splits the functionals into arrangement hyperplanes (nonconstant ones) and
// tracks which functional each hyperplane came from.
struct LayerArrangement {
  std::vector<Hyperplane> hyperplanes;
  std::vector<std::size_t> neuron_of;  // per hyperplane, index of its functional
};

inline LayerArrangement layer_arrangement(const AffineLayerInput& in) {
  LayerArrangement la;
  for (std::size_t i = 0; i < in.grads.size(); ++i) {
    if (in.grads[i].is_zero()) continue;
    la.hyperplanes.push_back({in.grads[i], -in.offs[i]});
    la.neuron_of.push_back(i);
  }
  return la;
}

// Activation pattern of every functional inside a cell (constants by sign of
// their offset, the rest from the cell sign vector through the index map).
inline std::vector<bool> activations(const AffineLayerInput& in, const LayerArrangement& la,
                                     const HyperplaneArrangement& arr, const SignVector& signs) {
  std::vector<bool> act(in.grads.size());
  for (std::size_t i = 0; i < in.grads.size(); ++i)
    if (in.grads[i].is_zero()) act[i] = in.offs[i].sign() > 0;
  for (std::size_t h = 0; h < la.hyperplanes.size(); ++h) {
    auto [ci, orient] = arr.index_map()[h];
    act[la.neuron_of[h]] = orient * signs[ci] > 0;
  }
  return act;
}

// Affine image of one ReLU layer under a fixed activation pattern, composed
// with the next layer's weights: out_j = sum_i W(j,i) act_i in_i + b_j.
inline AffineLayerInput compose_layer(const AffineLayerInput& in, const std::vector<bool>& act,
                                      const RMatrix& w, const RVector& b, std::size_t dim) {
  AffineLayerInput out;
  for (std::size_t j = 0; j < w.rows(); ++j) {
    RVector g(dim);
    Rational o = b[j];
    for (std::size_t i = 0; i < w.cols(); ++i) {
      if (!act[i] || w(j, i).is_zero()) continue;
      RVector term = in.grads[i];
      term *= w(j, i);
      g += term;
      o += w(j, i) * in.offs[i];
    }
    out.grads.push_back(std::move(g));
    out.offs.push_back(std::move(o));
  }
  return out;
}

inline LinearPiece make_piece(const ReluNetwork& net, const AffineLayerInput& last,
                              const std::vector<bool>& act, Cell&& cell) {
  LinearPiece piece;
  piece.gradient = RVector(net.input_dim());
  piece.offset = net.output_bias();
  const RVector& c = net.output_weights();
  for (std::size_t i = 0; i < last.grads.size(); ++i) {
    if (!act[i] || c[i].is_zero()) continue;
    RVector term = last.grads[i];
    term *= c[i];
    piece.gradient += term;
    piece.offset += c[i] * last.offs[i];
  }
  piece.region = std::move(cell.as_polyhedron);
  piece.witness = std::move(cell.witness);
  if (evaluate(net, piece.witness) != dot(piece.gradient, piece.witness) + piece.offset)
    throw internal_error("linear_regions: piece disagrees with forward pass");
  return piece;
}

} // namespace detail

// Linear pieces of a 2- or 3-layer network, each an exact affine map on a
// full-dimensional region.  2-layer: cells of the first-layer arrangement.
// 3-layer: within each first-layer cell, the second layer's boundaries are
// substituted and sub-enumerated.  Pieces are spot-checked at their witness.
inline std::vector<LinearPiece> linear_regions(const ReluNetwork& net) {
  if (net.hidden_layer_count() > 2)
    throw input_error("linear_regions: only 2- and 3-layer networks supported");
  const std::size_t d = net.input_dim();

  detail::AffineLayerInput first;
  for (std::size_t i = 0; i < net.layer(0).weights.rows(); ++i) {
    first.grads.push_back(net.layer(0).weights.row(i));
    first.offs.push_back(net.layer(0).biases[i]);
  }
  detail::LayerArrangement la1 = detail::layer_arrangement(first);
  HyperplaneArrangement arr1(la1.hyperplanes, d);

  std::vector<LinearPiece> pieces;
  for (Cell& cell : enumerate_cells(arr1)) {
    std::vector<bool> act1 = detail::activations(first, la1, arr1, cell.signs);
    if (net.hidden_layer_count() == 1) {
      pieces.push_back(detail::make_piece(net, first, act1, std::move(cell)));
      continue;
    }
    detail::AffineLayerInput second =
        detail::compose_layer(first, act1, net.layer(1).weights, net.layer(1).biases, d);
    detail::LayerArrangement la2 = detail::layer_arrangement(second);
    HyperplaneArrangement arr2(la2.hyperplanes, d);
    for (Cell& sub : enumerate_cells(arr2, cell.as_polyhedron)) {
      std::vector<bool> act2 = detail::activations(second, la2, arr2, sub.signs);
      pieces.push_back(detail::make_piece(net, second, act2, std::move(sub)));
    }
  }
  return pieces;
}

// Bias-free network on d+1 inputs with h(x, 1) = f(x): first-layer biases
// move onto the extra coordinate, and the output bias B becomes
// B max(0, y) + B max(0, -y) through two extra neurons.
inline ReluNetwork homogenize(const ReluNetwork& net) {
  if (net.hidden_layer_count() != 1)
    throw input_error("homogenize: exactly one hidden layer required");
  const std::size_t d = net.input_dim();
  const std::size_t n = net.layer(0).weights.rows();
  RMatrix w(n + 2, d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) w(i, j) = net.layer(0).weights(i, j);
    w(i, d) = net.layer(0).biases[i];
  }
  w(n, d) = Rational(1);
  w(n + 1, d) = Rational(-1);
  RVector c(n + 2);
  for (std::size_t i = 0; i < n; ++i) c[i] = net.output_weights()[i];
  c[n] = net.output_bias();
  c[n + 1] = net.output_bias();
  return ReluNetwork({{std::move(w), RVector(n + 2)}}, std::move(c), Rational(0));
}

// h(x,1) - h(-x,-1) for h = homogenize(net); equals sum_i c_i (a_i.x + b_i)
// identically, which is re-checked exactly.
inline Rational homogenization_symmetry_defect(const ReluNetwork& net, const RVector& x) {
  ReluNetwork h = homogenize(net);
  RVector xp(net.input_dim() + 1), xm(net.input_dim() + 1);
  for (std::size_t i = 0; i < net.input_dim(); ++i) {
    xp[i] = x[i];
    xm[i] = -x[i];
  }
  xp[net.input_dim()] = Rational(1);
  xm[net.input_dim()] = Rational(-1);
  Rational defect = evaluate(h, xp) - evaluate(h, xm);
  Rational expected;
  for (std::size_t i = 0; i < net.layer(0).weights.rows(); ++i)
    expected += net.output_weights()[i] *
                (dot(net.layer(0).weights.row(i), x) + net.layer(0).biases[i]);
  if (defect != expected) throw internal_error("symmetry defect formula violated");
  return defect;
}

struct ZonotopePair {
  Zonotope plus;
  Zonotope minus;
};

// Bias-free 2-layer net -> (Z+, Z-): |c_i| folds into the neuron weights,
// positive output weights feed Z+, negative ones Z-.
inline ZonotopePair to_zonotope_pair(const ReluNetwork& net) {
  if (net.hidden_layer_count() != 1)
    throw input_error("to_zonotope_pair: exactly one hidden layer required");
  if (!net.bias_free()) throw input_error("to_zonotope_pair: network must be bias-free");
  const std::size_t d = net.input_dim();
  std::vector<RVector> plus, minus;
  for (std::size_t i = 0; i < net.layer(0).weights.rows(); ++i) {
    const Rational& c = net.output_weights()[i];
    if (c.is_zero()) continue;
    RVector g = net.layer(0).weights.row(i);
    g *= c.abs();
    (c.sign() > 0 ? plus : minus).push_back(std::move(g));
  }
  return {Zonotope::from_columns(d, plus), Zonotope::from_columns(d, minus)};
}

// (Z+, Z-) -> bias-free 2-layer net computing support(Z+, x) - support(Z-, x).
inline ReluNetwork from_zonotope_pair(const ZonotopePair& pair) {
  if (pair.plus.dim() != pair.minus.dim())
    throw input_error("from_zonotope_pair: dimension mismatch");
  if (!pair.plus.center().is_zero() || !pair.minus.center().is_zero())
    throw input_error("from_zonotope_pair: centers must be zero");
  const std::size_t d = pair.plus.dim();
  const std::size_t n = pair.plus.generator_count() + pair.minus.generator_count();
  RMatrix w(n, d);
  RVector c(n);
  std::size_t r = 0;
  for (std::size_t i = 0; i < pair.plus.generator_count(); ++i, ++r) {
    for (std::size_t j = 0; j < d; ++j) w(r, j) = pair.plus.generator(i)[j];
    c[r] = Rational(1);
  }
  for (std::size_t i = 0; i < pair.minus.generator_count(); ++i, ++r) {
    for (std::size_t j = 0; j < d; ++j) w(r, j) = pair.minus.generator(i)[j];
    c[r] = Rational(-1);
  }
  return ReluNetwork({{std::move(w), RVector(n)}}, std::move(c), Rational(0));
}

// 3-layer network computing max(0, f(x)).
inline ReluNetwork lift_to_3layer(const ReluNetwork& net) {
  if (net.hidden_layer_count() != 1)
    throw input_error("lift_to_3layer: exactly one hidden layer required");
  const std::size_t n = net.layer(0).weights.rows();
  RMatrix w2(1, n);
  for (std::size_t i = 0; i < n; ++i) w2(0, i) = net.output_weights()[i];
  RVector b2{net.output_bias()};
  std::vector<HiddenLayer> layers{net.layer(0), {std::move(w2), std::move(b2)}};
  return ReluNetwork(std::move(layers), RVector{Rational(1)}, Rational(0));
}

} // namespace zv
