#pragma once

// Multicolored-clique hardness instances: greedy Sidon labels, spike and
// penalty gadgets, and the raw-sum / positivity / Lipschitz network
// generators, plus a brute-force clique oracle for ground truth.
//
// The raw-sum network computes f(x) = sum over color pairs of spike
// functions (unit-height stripes at existing edges' label sums) plus one
// penalty function per color (unit spikes at that color's node labels).
// Its maximum is k + C(k,2) exactly when the graph has a k-colored clique
// and at most k + C(k,2) - 1 otherwise.  The positivity instance shifts the
// output bias by 1 - k - C(k,2) and homogenizes; the Lipschitz instance
// homogenizes the raw network and scales the extra input's coefficients by
// a rational epsilon chosen from k, a_n, and the requested exponent p.

#include <zv/errors.hpp>
#include <zv/linalg.hpp>
#include <zv/relu_network.hpp>
#include <zv/zonotope.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace zv {

struct ColoredGraph {
  std::vector<std::vector<int>> color_classes;  // node ids per color
  std::vector<std::pair<int, int>> edges;       // unordered, distinct colors
};

struct SidonLabels {
  std::map<int, long long> omega;                // node id -> label
  std::vector<std::vector<long long>> classes;   // per-color label lists W_c
  long long max_label = 0;                       // a_n
};

// One first-layer neuron of a gadget: max(0, slope * t + bias) with output
// weight out, where t is the gadget's scalar argument (x for penalties,
// x + y for spikes).
struct GadgetNeuron {
  Rational slope;
  Rational bias;
  Rational out;
};

enum class InstanceKind : std::uint8_t { RawSum, Positivity, Lipschitz };

struct HardnessInstance {
  ReluNetwork network;
  InstanceKind kind = InstanceKind::RawSum;
  ColoredGraph graph;
  SidonLabels labels;
  std::size_t k = 0;
  // Lipschitz instances only:
  std::optional<PNorm> p;
  std::optional<Rational> epsilon;
  std::optional<Rational> threshold;
};

// Mian-Chowla greedy Sidon sequence: a_1 = 1, each next element is the
// smallest integer keeping all pairwise sums a_i + a_j (i <= j) distinct.
inline std::vector<long long> greedy_sidon(std::size_t n) {
  if (n == 0) throw input_error("greedy_sidon: n must be positive");
  std::vector<long long> a;
  std::set<long long> sums;  // all pairwise sums of the current prefix
  for (long long cand = 1; a.size() < n; ++cand) {
    bool ok = !sums.count(cand + cand);
    for (std::size_t i = 0; ok && i < a.size(); ++i)
      if (sums.count(cand + a[i])) ok = false;
    if (!ok) continue;
    for (long long x : a) sums.insert(cand + x);
    sums.insert(cand + cand);
    a.push_back(cand);
  }
  // Re-verify the Sidon property from scratch before returning.
  std::set<long long> check;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i; j < a.size(); ++j)
      if (!check.insert(a[i] + a[j]).second)
        throw internal_error("greedy_sidon: pairwise sums collide");
  return a;
}

namespace detail {

inline void require_distinct(const std::vector<long long>& labels, const char* who) {
  std::set<long long> seen;
  for (long long w : labels)
    if (!seen.insert(w).second) throw input_error(std::string(who) + ": duplicate label");
}

} // namespace detail

// Spike gadget: per label w the three neurons computing
// max(0, 4(t - w + 1/4)) - max(0, 8(t - w)) + max(0, 4(t - w - 1/4)),
// a unit-height stripe of half-width 1/4 around t = w.
inline std::vector<GadgetNeuron> build_spike(const std::vector<long long>& edge_labels) {
  detail::require_distinct(edge_labels, "build_spike");
  std::vector<GadgetNeuron> out;
  out.reserve(3 * edge_labels.size());
  for (long long w : edge_labels) {
    out.push_back({Rational(4), Rational(1) - Rational(4) * Rational(w), Rational(1)});
    out.push_back({Rational(8), Rational(-8) * Rational(w), Rational(-1)});
    out.push_back({Rational(4), Rational(-4) * Rational(w) - Rational(1), Rational(1)});
  }
  return out;
}

// Penalty gadget: per label w the three neurons computing
// max(0, 8(t - w + 1/8)) - max(0, 16(t - w)) + max(0, 8(t - w - 1/8)),
// a unit-height spike of half-width 1/8 around t = w.
inline std::vector<GadgetNeuron> build_penalty(const std::vector<long long>& node_labels) {
  detail::require_distinct(node_labels, "build_penalty");
  std::vector<GadgetNeuron> out;
  out.reserve(3 * node_labels.size());
  for (long long w : node_labels) {
    out.push_back({Rational(8), Rational(1) - Rational(8) * Rational(w), Rational(1)});
    out.push_back({Rational(16), Rational(-16) * Rational(w), Rational(-1)});
    out.push_back({Rational(8), Rational(-8) * Rational(w) - Rational(1), Rational(1)});
  }
  return out;
}

namespace detail {

struct GraphIndex {
  std::size_t k = 0;
  std::map<int, std::pair<std::size_t, std::size_t>> where;  // id -> (color, index)
  std::set<std::pair<int, int>> edge_set;                    // canonical (min, max)
};

inline GraphIndex index_graph(const ColoredGraph& g) {
  GraphIndex ix;
  ix.k = g.color_classes.size();
  if (ix.k == 0) throw input_error("colored graph: no color classes");
  for (std::size_t c = 0; c < ix.k; ++c) {
    if (g.color_classes[c].empty()) throw input_error("colored graph: empty color class");
    for (std::size_t i = 0; i < g.color_classes[c].size(); ++i)
      if (!ix.where.emplace(g.color_classes[c][i], std::make_pair(c, i)).second)
        throw input_error("colored graph: duplicate node id");
  }
  for (const auto& [u, v] : g.edges) {
    auto iu = ix.where.find(u), iv = ix.where.find(v);
    if (iu == ix.where.end() || iv == ix.where.end())
      throw input_error("colored graph: edge endpoint is not a node");
    if (iu->second.first == iv->second.first)
      throw input_error("colored graph: edge inside one color class");
    if (!ix.edge_set.emplace(std::min(u, v), std::max(u, v)).second)
      throw input_error("colored graph: duplicate edge");
  }
  return ix;
}

inline SidonLabels assign_labels(const ColoredGraph& g) {
  std::size_t n = 0;
  for (const auto& cls : g.color_classes) n += cls.size();
  std::vector<long long> a = greedy_sidon(n);
  SidonLabels lab;
  std::size_t next = 0;
  for (const auto& cls : g.color_classes) {
    std::vector<long long> w;
    for (int id : cls) {
      lab.omega[id] = a[next];
      w.push_back(a[next]);
      ++next;
    }
    lab.classes.push_back(std::move(w));
  }
  lab.max_label = a.back();
  return lab;
}

} // namespace detail

// Number of clique constraints k + C(k,2), the raw-sum network's maximum on
// yes-instances.
inline Rational clique_bound(std::size_t k) {
  return Rational(static_cast<long long>(k + k * (k - 1) / 2));
}

// The raw-sum instance: a 2-layer network on k inputs with 3(|V| + |E|)
// hidden neurons computing the sum of all spike and penalty gadgets.
inline HardnessInstance clique_to_network(const ColoredGraph& g) {
  detail::GraphIndex ix = detail::index_graph(g);
  SidonLabels lab = detail::assign_labels(g);
  const std::size_t k = ix.k;

  std::size_t edge_count = ix.edge_set.size();
  std::size_t node_count = lab.omega.size();
  RMatrix w(3 * (node_count + edge_count), k);
  RVector b(w.rows()), c(w.rows());
  std::size_t row = 0;
  auto emit = [&](const std::vector<GadgetNeuron>& neurons,
                  const std::vector<std::size_t>& inputs) {
    for (const GadgetNeuron& neuron : neurons) {
      for (std::size_t j : inputs) w(row, j) = neuron.slope;
      b[row] = neuron.bias;
      c[row] = neuron.out;
      ++row;
    }
  };

  // Spikes grouped by color pair (r, l), edges in label order within a pair.
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t l = r + 1; l < k; ++l) {
      std::vector<long long> labels;
      for (const auto& [u, v] : ix.edge_set) {
        auto cu = ix.where.at(u), cv = ix.where.at(v);
        if (std::min(cu.first, cv.first) == r && std::max(cu.first, cv.first) == l)
          labels.push_back(lab.omega.at(u) + lab.omega.at(v));
      }
      std::sort(labels.begin(), labels.end());
      emit(build_spike(labels), {r, l});
    }
  // Penalties in color order, nodes in class order.
  for (std::size_t cidx = 0; cidx < k; ++cidx)
    emit(build_penalty(lab.classes[cidx]), {cidx});

  ReluNetwork net({{std::move(w), std::move(b)}}, std::move(c), Rational(0));
  return {std::move(net), InstanceKind::RawSum, g, std::move(lab), k, {}, {}, {}};
}

// Positivity instance: output bias shifted to 1 - k - C(k,2), then
// homogenized (bias-free, k + 1 inputs, 3(|V| + |E|) + 2 neurons).  The
// homogenization has zero symmetry defect because every gadget triple's
// output-weighted weights and biases cancel.
inline HardnessInstance clique_to_positivity_instance(const ColoredGraph& g) {
  HardnessInstance raw = clique_to_network(g);
  ReluNetwork shifted(
      {raw.network.layer(0)}, RVector(raw.network.output_weights()),
      Rational(1) - clique_bound(raw.k));
  HardnessInstance out{homogenize(shifted), InstanceKind::Positivity, raw.graph,
                       raw.labels,          raw.k,                    {},
                       {},                  {}};
  return out;
}

namespace detail {

inline Rational rational_pow(const Rational& base, std::size_t e) {
  Rational r(1), b = base;
  for (; e; e >>= 1) {
    if (e & 1) r *= b;
    b *= b;
  }
  return r;
}

inline ReluNetwork scale_input_column(const ReluNetwork& net, std::size_t j,
                                      const Rational& factor) {
  RMatrix w = net.layer(0).weights;
  for (std::size_t i = 0; i < w.rows(); ++i) w(i, j) *= factor;
  return ReluNetwork({{std::move(w), RVector(net.layer(0).biases)}},
                     RVector(net.output_weights()), net.output_bias());
}

} // namespace detail

// Lipschitz instance: the homogenized raw-sum network with the extra
// input's coefficients scaled by epsilon, plus the decision threshold
// L = (k + C(k,2) - 1/2) * epsilon.  For p >= 1 (and infinity),
// epsilon = 1 / (2 k a_n (k + C(k,2))); for p in (0,1) with N = ceil(1/p),
// epsilon = (p / (2(k + C(k,2))))^N / (a_n k^N).  N is capped at 4096: the
// scaled weights carry about N log2(2K/p) bits, so smaller p is a resource
// question, not a correctness one.
inline HardnessInstance clique_to_lipschitz_instance(const ColoredGraph& g, const PNorm& p) {
  if (p.kind == PNorm::Kind::General && p.q.sign() <= 0)
    throw input_error("clique_to_lipschitz_instance: p must be positive");

  HardnessInstance raw = clique_to_network(g);
  const Rational big_k = clique_bound(raw.k);
  const Rational a_n(raw.labels.max_label);
  const Rational kk(static_cast<long long>(raw.k));

  Rational eps;
  if (p.kind == PNorm::Kind::General && p.q < Rational(1)) {
    std::size_t cap = 1;
    while (Rational(static_cast<long long>(cap)) * p.q < Rational(1)) {
      if (++cap > 4096)
        throw resource_error("clique_to_lipschitz_instance: p too small (ceil(1/p) > 4096)");
    }
    eps = detail::rational_pow(p.q / (Rational(2) * big_k), cap) /
          (a_n * detail::rational_pow(kk, cap));
  } else {
    eps = Rational(1) / (Rational(2) * kk * a_n * big_k);
  }

  ReluNetwork h = detail::scale_input_column(homogenize(raw.network),
                                             raw.network.input_dim(), eps);
  HardnessInstance out{std::move(h), InstanceKind::Lipschitz, raw.graph, raw.labels,
                       raw.k,        p,                       eps,       {}};
  out.threshold = (big_k - Rational(1, 2)) * eps;
  return out;
}

// Exhaustive multicolored-clique search over the product of color classes,
// guarded at 10^7 combinations; returns one node per color or nothing.
inline std::optional<std::vector<int>> brute_force_clique(const ColoredGraph& g) {
  detail::GraphIndex ix = detail::index_graph(g);
  unsigned long long combos = 1;
  for (const auto& cls : g.color_classes) {
    combos *= cls.size();
    if (combos > 10000000ull)
      throw resource_error("brute_force_clique: more than 10^7 combinations");
  }
  const std::size_t k = ix.k;
  std::vector<std::size_t> pick(k, 0);
  while (true) {
    bool clique = true;
    for (std::size_t r = 0; clique && r < k; ++r)
      for (std::size_t l = r + 1; clique && l < k; ++l) {
        int u = g.color_classes[r][pick[r]], v = g.color_classes[l][pick[l]];
        if (!ix.edge_set.count({std::min(u, v), std::max(u, v)})) clique = false;
      }
    if (clique) {
      std::vector<int> nodes;
      for (std::size_t c = 0; c < k; ++c) nodes.push_back(g.color_classes[c][pick[c]]);
      return nodes;
    }
    std::size_t c = k;
    while (c > 0) {
      --c;
      if (++pick[c] < g.color_classes[c].size()) break;
      pick[c] = 0;
      if (c == 0) return std::nullopt;
    }
  }
}

} // namespace zv
