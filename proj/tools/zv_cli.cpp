// zv: exact ReLU-network verification and zonotope analysis over JSON files.
//
// Verdicts are data in the result JSON, never exit codes.  Exit status:
//   0  computed (whatever the verdict)
//   1  internal failure
//   2  malformed input (JSON-pointered message on stderr)
//   3  resource guard tripped
//
// Every witness or certificate is re-verified by direct substitution before
// it is written.  Randomized subcommands take --seed; without one a fresh
// seed is drawn and echoed in the result.

#include <zv/approx.hpp>
#include <zv/arrangement.hpp>
#include <zv/errors.hpp>
#include <zv/icnn.hpp>
#include <zv/json_io.hpp>
#include <zv/lp.hpp>
#include <zv/reduce.hpp>
#include <zv/relu_network.hpp>
#include <zv/verify.hpp>
#include <zv/zonotope.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

using namespace zv;

namespace {

class Timer {
public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

void emit(Json j, const Timer& t, const std::string& out_path) {
  j["ms"] = t.ms();
  if (out_path.empty())
    std::cout << j.dump(2) << std::endl;
  else
    save_json_file(out_path, j);
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
}

const char* status_name(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::Infeasible: return "infeasible";
  }
  throw internal_error("status_name: unknown status");
}

// All biases zeroed; the homogeneous part of the network.
ReluNetwork strip_biases(const ReluNetwork& net) {
  std::vector<HiddenLayer> layers;
  for (std::size_t i = 0; i < net.hidden_layer_count(); ++i)
    layers.push_back({net.layer(i).weights, RVector(net.layer(i).weights.rows())});
  return ReluNetwork(std::move(layers), net.output_weights(), Rational(0));
}

Rational exact_norm(const RVector& x, PNorm::Kind kind) {
  Rational v;
  for (std::size_t i = 0; i < x.size(); ++i)
    v = kind == PNorm::Kind::One ? v + x[i].abs() : max(v, x[i].abs());
  return v;
}

Rational dual_norm_measure(const RVector& g, PNorm::Kind kind) {
  Rational v;
  switch (kind) {
    case PNorm::Kind::One:  // dual of l1 is max |g_i|
      for (std::size_t i = 0; i < g.size(); ++i) v = max(v, g[i].abs());
      return v;
    case PNorm::Kind::Inf:  // dual of linf is sum |g_i|
      for (std::size_t i = 0; i < g.size(); ++i) v += g[i].abs();
      return v;
    default:  // Two, compared squared
      return dot(g, g);
  }
}

Json norm_max_json(const NormMaxResult& r, const PNorm& p) {
  Json j{{"p", pnorm_to_string(p)},
         {"argmax", vector_to_json(r.argmax)},
         {"approx", r.approx},
         {"exact", r.exact}};
  if (p.kind == PNorm::Kind::Two)
    j["value_squared"] = r.value_squared.str();
  else if (r.exact)
    j["value"] = r.value.str();
  if (!r.exact) j["tolerance"] = r.tolerance;
  return j;
}

// ---------- subcommand bodies ----------

void run_verify_positivity(const std::string& net_path, const std::string& out) {
  const ReluNetwork net = network_from_json(load_json_file(net_path));
  const Timer t;
  const VerifyOutcome o = positivity(net);
  if (o.holds && (!o.witness || evaluate(net, *o.witness).sign() <= 0))
    throw internal_error("verify-positivity: witness failed re-verification");
  Json j{{"holds", o.holds}};
  if (o.witness) j["witness"] = vector_to_json(*o.witness);
  if (o.value) j["value"] = o.value->str();
  emit(std::move(j), t, out);
}

void run_verify_surjectivity(const std::string& net_path, const std::string& out) {
  const ReluNetwork net = network_from_json(load_json_file(net_path));
  const Timer t;
  const VerifyOutcome o = surjectivity(net);
  const ReluNetwork homog = strip_biases(net);
  if (o.witness && evaluate(homog, *o.witness).sign() <= 0)
    throw internal_error("verify-surjectivity: positive witness failed re-verification");
  if (o.second_witness && evaluate(homog, *o.second_witness).sign() >= 0)
    throw internal_error("verify-surjectivity: negative witness failed re-verification");
  Json j{{"holds", o.holds}};
  if (o.witness) j["positive_witness"] = vector_to_json(*o.witness);
  if (o.second_witness) j["negative_witness"] = vector_to_json(*o.second_witness);
  emit(std::move(j), t, out);
}

void run_verify_zero(const std::string& net_path, const std::string& out) {
  const ReluNetwork net = network_from_json(load_json_file(net_path));
  const Timer t;
  const VerifyOutcome o = zero_function_check(net);
  if (!o.holds && (!o.witness || evaluate(net, *o.witness).is_zero()))
    throw internal_error("verify-zero: witness failed re-verification");
  Json j{{"holds", o.holds}};
  if (o.witness) j["witness"] = vector_to_json(*o.witness);
  if (o.value) j["value"] = o.value->str();
  emit(std::move(j), t, out);
}

void run_max(const std::string& net_path, const std::string& poly_path, const std::string& out) {
  const ReluNetwork net = network_from_json(load_json_file(net_path));
  const Polyhedron p = polyhedron_from_json(load_json_file(poly_path));
  const Timer t;
  const VerifyOutcome o = max_over_polyhedron(net, p);
  Json j{{"status", status_name(*o.status)}};
  if (o.status == LpStatus::Optimal) {
    if (!p.contains(*o.witness) || evaluate(net, *o.witness) != *o.value)
      throw internal_error("max: witness failed re-verification");
    j["value"] = o.value->str();
    j["argmax"] = vector_to_json(*o.witness);
  }
  emit(std::move(j), t, out);
}

void run_verify_io(const std::string& net_path, const std::string& poly_path,
                   const std::optional<Rational>& lo, const std::optional<Rational>& hi,
                   const std::string& out) {
  const ReluNetwork net = network_from_json(load_json_file(net_path));
  const Polyhedron p = polyhedron_from_json(load_json_file(poly_path));
  const Timer t;
  const VerifyOutcome o = verify_io(net, p, lo, hi);
  Json j{{"holds", o.holds}};
  if (o.status) j["input_region"] = status_name(*o.status);
  if (!o.holds) {
    const Rational v = evaluate(net, *o.witness);
    const bool outside = (hi && v > *hi) || (lo && v < *lo);
    if (!p.contains(*o.witness) || !outside)
      throw internal_error("verify-io: counterexample failed re-verification");
    j["counterexample"] = vector_to_json(*o.witness);
    j["value"] = v.str();
  }
  emit(std::move(j), t, out);
}

void run_lipschitz(const std::string& net_path, const PNorm& p, const std::string& out) {
  const ReluNetwork net = network_from_json(load_json_file(net_path));
  const Timer t;
  const LipschitzResult r = lipschitz_exact(net, p);
  const Rational measure = dual_norm_measure(r.gradient, p.kind);
  if (measure != (p.kind == PNorm::Kind::Two ? r.value_squared : r.value))
    throw internal_error("lipschitz: gradient failed re-verification");
  Json j{{"p", pnorm_to_string(p)},
         {"gradient", vector_to_json(r.gradient)},
         {"approx", r.approx}};
  if (p.kind == PNorm::Kind::Two)
    j["value_squared"] = r.value_squared.str();
  else
    j["value"] = r.value.str();
  emit(std::move(j), t, out);
}

void run_icnn_lipschitz(const std::string& net_path, const PNorm& p, const std::string& out) {
  const ReluNetwork net = network_from_json(load_json_file(net_path));
  const Timer t;
  const std::size_t before = lp_call_count();
  const Rational value = icnn_lipschitz(net, p);
  Json j{{"p", pnorm_to_string(p)},
         {"value", value.str()},
         {"lp_calls", lp_call_count() - before}};
  emit(std::move(j), t, out);
}

void run_zono_contain(const std::string& inner_path, const std::string& outer_path,
                      const std::string& out) {
  const Zonotope inner = zonotope_from_json(load_json_file(inner_path));
  const Zonotope outer = zonotope_from_json(load_json_file(outer_path));
  const Timer t;
  const ContainmentVerdict v = containment(inner, outer);
  Json j{{"contained", v.contained}};
  if (!v.contained) {
    const auto& [dir, offset] = *v.separator;
    if (dot(dir, *v.witness) <= offset || !(support(outer, dir).first < offset) ||
        membership(outer, *v.witness))
      throw internal_error("zono-contain: separator failed re-verification");
    j["witness"] = vector_to_json(*v.witness);
    j["separator"] = Json{{"direction", vector_to_json(dir)}, {"offset", offset.str()}};
  }
  emit(std::move(j), t, out);
}

void run_zono_lpmax(const std::string& z_path, const PNorm& p, const std::string& out) {
  const Zonotope z = zonotope_from_json(load_json_file(z_path));
  const Timer t;
  const NormMaxResult r = lp_norm_max(z, p);
  if (!membership(z, r.argmax))
    throw internal_error("zono-lpmax: argmax failed re-verification");
  if (p.kind == PNorm::Kind::One || p.kind == PNorm::Kind::Inf) {
    if (exact_norm(r.argmax, p.kind) != r.value)
      throw internal_error("zono-lpmax: value failed re-verification");
  } else if (p.kind == PNorm::Kind::Two && dot(r.argmax, r.argmax) != r.value_squared) {
    throw internal_error("zono-lpmax: squared value failed re-verification");
  }
  emit(norm_max_json(r, p), t, out);
}

void run_zono_reduce(const std::string& z_path, const Rational& epsilon, std::uint64_t seed,
                     double sampling_constant, std::size_t repetitions, const std::string& out) {
  const Zonotope z = zonotope_from_json(load_json_file(z_path));
  const Timer t;
  const Zonotope zr = order_reduce(z, epsilon, seed, sampling_constant, repetitions);
  // Midpoint preservation is the construction's exact invariant.
  RVector mid_in = z.center(), mid_out = zr.center();
  const Rational half(1, 2);
  for (std::size_t jx = 0; jx < z.generator_count(); ++jx)
    for (std::size_t c = 0; c < z.dim(); ++c) mid_in[c] += z.generator(jx)[c] * half;
  for (std::size_t jx = 0; jx < zr.generator_count(); ++jx)
    for (std::size_t c = 0; c < zr.dim(); ++c) mid_out[c] += zr.generator(jx)[c] * half;
  if (mid_in != mid_out)
    throw internal_error("zono-reduce: midpoint not preserved");
  Json j{{"seed", seed},
         {"epsilon", epsilon.str()},
         {"generators_in", z.generator_count()},
         {"generators_out", zr.generator_count()},
         {"zonotope", zonotope_to_json(zr)}};
  emit(std::move(j), t, out);
}

void run_zono_approx_max(const std::string& z_path, const PNorm& p, const Rational& epsilon,
                         std::uint64_t seed, double sampling_constant, std::size_t repetitions,
                         const std::string& out) {
  const Zonotope z = zonotope_from_json(load_json_file(z_path));
  const Timer t;
  const NormMaxResult r = approx_norm_max(z, p, epsilon, seed, sampling_constant, repetitions);
  Json j = norm_max_json(r, p);
  j["alpha"] = r.approx;
  j["seed"] = seed;
  j["epsilon"] = epsilon.str();
  emit(std::move(j), t, out);
}

void run_gen_clique_instance(const std::string& graph_path, const std::string& kind,
                             const PNorm& p, const std::string& out) {
  const ColoredGraph g = graph_from_json(load_json_file(graph_path));
  const Timer t;
  HardnessInstance inst = [&] {
    if (kind == "raw-sum") return clique_to_network(g);
    if (kind == "positivity") return clique_to_positivity_instance(g);
    if (kind == "lipschitz") return clique_to_lipschitz_instance(g, p);
    throw input_error("gen-clique-instance: unknown kind \"" + kind + "\"");
  }();
  // Kind-specific spot checks before writing.
  const Rational bound = clique_bound(inst.k);
  switch (inst.kind) {
    case InstanceKind::RawSum:
      if (!evaluate(inst.network, RVector(inst.network.input_dim())).is_zero())
        throw internal_error("gen-clique-instance: raw sum must vanish at 0");
      break;
    case InstanceKind::Positivity:
    case InstanceKind::Lipschitz: {
      RVector zero(inst.network.input_dim());
      if (!evaluate(inst.network, zero).is_zero())
        throw internal_error("gen-clique-instance: homogenization must vanish at 0");
      break;
    }
  }
  Json j = instance_to_json(inst);
  j["clique_bound"] = bound.str();
  emit(std::move(j), t, out);
}

void run_solve_clique(const std::string& graph_path, const std::string& out) {
  const ColoredGraph g = graph_from_json(load_json_file(graph_path));
  const Timer t;
  const std::optional<std::vector<int>> clique = brute_force_clique(g);
  Json j{{"found", clique.has_value()}};
  if (clique) {
    // Independent substitution: one node per class, all pairs adjacent.
    std::set<std::pair<int, int>> edges;
    for (const auto& [u, v] : g.edges) edges.insert({std::min(u, v), std::max(u, v)});
    if (clique->size() != g.color_classes.size())
      throw internal_error("solve-clique: clique misses a color class");
    for (std::size_t c = 0; c < clique->size(); ++c) {
      bool in_class = false;
      for (int id : g.color_classes[c]) in_class = in_class || id == (*clique)[c];
      if (!in_class) throw internal_error("solve-clique: node outside its color class");
      for (std::size_t c2 = c + 1; c2 < clique->size(); ++c2)
        if (!edges.count({std::min((*clique)[c], (*clique)[c2]),
                          std::max((*clique)[c], (*clique)[c2])}))
          throw internal_error("solve-clique: clique pair not adjacent");
    }
    j["clique"] = *clique;
  } else {
    j["clique"] = nullptr;
  }
  emit(std::move(j), t, out);
}

// ---------- bench ----------

long long binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long expected_cells(std::size_t n, std::size_t d) {
  long long s = 0;
  for (std::size_t i = 0; i <= d; ++i) s += binomial(static_cast<long long>(n), static_cast<long long>(i));
  return s;
}

long long expected_vertices(std::size_t n, std::size_t d) {
  long long s = 0;
  for (std::size_t i = 0; i + 1 <= d; ++i)
    s += binomial(static_cast<long long>(n) - 1, static_cast<long long>(i));
  return 2 * s;
}

void bench_write(const Json& rec, const std::string& out) {
  if (out.empty()) {
    std::cout << rec.dump() << std::endl;
    return;
  }
  std::ofstream f(out, std::ios::app);
  if (!f) throw input_error("cannot open \"" + out + "\" for appending");
  f << rec.dump() << '\n';
}

void run_bench(const std::string& kind, std::size_t d_min, std::size_t d_max, std::size_t n_min,
               std::size_t n_max, std::uint64_t seed, const std::string& out) {
  if (kind != "cells" && kind != "vertices")
    throw input_error("bench: kind must be \"cells\" or \"vertices\"");
  constexpr long long guard = 200000;  // max expected count per record
  for (std::size_t d = d_min; d <= d_max; ++d)
    for (std::size_t n = n_min; n <= n_max; ++n) {
      const long long expected =
          kind == "cells" ? expected_cells(n, d) : expected_vertices(n, d);
      if (expected > guard) {
        bench_write(Json{{"kind", kind}, {"d", d}, {"n", n}, {"truncated", true}}, out);
        return;
      }
      std::mt19937_64 rng(detail::mix_seed(seed, d * 1000 + n));
      const auto draw = [&rng] {
        return Rational(static_cast<long long>(rng() % 2001) - 1000,
                        static_cast<long long>(rng() % 7) + 1);
      };
      long long count = 0;
      double ms = 0;
      if (kind == "cells") {
        std::vector<Hyperplane> hs;
        for (std::size_t i = 0; i < n; ++i) {
          RVector normal(d);
          do {
            for (std::size_t c = 0; c < d; ++c) normal[c] = draw();
          } while (normal.is_zero());
          hs.push_back({std::move(normal), draw()});
        }
        const HyperplaneArrangement arr(std::move(hs), d);
        const Timer t;
        count = static_cast<long long>(enumerate_cells(arr).size());
        ms = t.ms();
      } else {
        RMatrix gens(d, n);
        for (std::size_t jx = 0; jx < n; ++jx) {
          bool zero = true;
          while (zero) {
            for (std::size_t c = 0; c < d; ++c) {
              gens(c, jx) = draw();
              zero = zero && gens(c, jx).is_zero();
            }
          }
        }
        const Zonotope z(gens, RVector(d));
        const Timer t;
        count = static_cast<long long>(vertices(z).size());
        ms = t.ms();
      }
      bench_write(Json{{"kind", kind},
                       {"d", d},
                       {"n", n},
                       {"seed", seed},
                       {"ms", ms},
                       {"count", count},
                       {"expected", expected},
                       {"match", count == expected}},
                  out);
    }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact ReLU network verification and zonotope analysis"};
  app.require_subcommand(1);

  std::string net_path, poly_path, z_path, inner_path, outer_path, graph_path, out_path;
  std::string p_str = "inf", kind = "positivity", lo_str, hi_str, eps_str = "1/2";
  std::uint64_t seed = 0;
  double sampling_constant = 20.0;
  std::size_t repetitions = 5;
  std::size_t d_min = 2, d_max = 3, n_min = 2, n_max = 6;

  const auto add_out = [&](CLI::App* sub) {
    sub->add_option("-o,--output", out_path, "write the result JSON here instead of stdout");
  };
  const auto add_seeded = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "RNG seed (fresh one drawn and echoed when omitted)");
    sub->add_option("--epsilon", eps_str, "approximation parameter (rational)")
        ->capture_default_str();
    sub->add_option("--sampling-constant", sampling_constant,
                    "constant C in r = ceil(C d ln(d+1)/eps^2)")
        ->capture_default_str();
    sub->add_option("--repetitions", repetitions, "independent repetitions (median kept)")
        ->capture_default_str();
  };

  CLI::App* vp = app.add_subcommand("verify-positivity", "is f(x) > 0 somewhere?");
  vp->add_option("network", net_path, "network JSON")->required();
  add_out(vp);
  vp->callback([&] { run_verify_positivity(net_path, out_path); });

  CLI::App* vs = app.add_subcommand("verify-surjectivity", "is f onto R?");
  vs->add_option("network", net_path, "network JSON")->required();
  add_out(vs);
  vs->callback([&] { run_verify_surjectivity(net_path, out_path); });

  CLI::App* vz = app.add_subcommand("verify-zero", "is f identically zero?");
  vz->add_option("network", net_path, "network JSON")->required();
  add_out(vz);
  vz->callback([&] { run_verify_zero(net_path, out_path); });

  CLI::App* mx = app.add_subcommand("max", "exact max of f over a polyhedron");
  mx->add_option("network", net_path, "network JSON")->required();
  mx->add_option("polyhedron", poly_path, "polyhedron JSON")->required();
  add_out(mx);
  mx->callback([&] { run_max(net_path, poly_path, out_path); });

  CLI::App* io = app.add_subcommand("verify-io", "does f(P) stay inside [lo, hi]?");
  io->add_option("network", net_path, "network JSON")->required();
  io->add_option("polyhedron", poly_path, "input polyhedron JSON")->required();
  io->add_option("--lo", lo_str, "lower output bound (rational)");
  io->add_option("--hi", hi_str, "upper output bound (rational)");
  add_out(io);
  io->callback([&] {
    std::optional<Rational> lo, hi;
    if (io->count("--lo")) lo = Rational::parse(lo_str);
    if (io->count("--hi")) hi = Rational::parse(hi_str);
    run_verify_io(net_path, poly_path, lo, hi, out_path);
  });

  CLI::App* lip = app.add_subcommand("lipschitz", "exact Lipschitz constant (p in {1,2,inf})");
  lip->add_option("network", net_path, "network JSON")->required();
  lip->add_option("--p", p_str, "norm")->capture_default_str();
  add_out(lip);
  lip->callback([&] { run_lipschitz(net_path, PNorm::parse(p_str), out_path); });

  CLI::App* il = app.add_subcommand("icnn-lipschitz", "ICNN Lipschitz constant (p in {1,inf})");
  il->add_option("network", net_path, "network JSON")->required();
  il->add_option("--p", p_str, "norm")->capture_default_str();
  add_out(il);
  il->callback([&] { run_icnn_lipschitz(net_path, PNorm::parse(p_str), out_path); });

  CLI::App* zc = app.add_subcommand("zono-contain", "is the first zonotope inside the second?");
  zc->add_option("inner", inner_path, "inner zonotope JSON")->required();
  zc->add_option("outer", outer_path, "outer zonotope JSON")->required();
  add_out(zc);
  zc->callback([&] { run_zono_contain(inner_path, outer_path, out_path); });

  CLI::App* zl = app.add_subcommand("zono-lpmax", "exact p-norm maximum over a zonotope");
  zl->add_option("zonotope", z_path, "zonotope JSON")->required();
  zl->add_option("--p", p_str, "norm")->capture_default_str();
  add_out(zl);
  zl->callback([&] { run_zono_lpmax(z_path, PNorm::parse(p_str), out_path); });

  CLI::App* zr = app.add_subcommand("zono-reduce", "randomized order reduction");
  zr->add_option("zonotope", z_path, "zonotope JSON")->required();
  add_seeded(zr);
  add_out(zr);
  zr->callback([&] {
    if (!zr->count("--seed")) seed = fresh_seed();
    run_zono_reduce(z_path, Rational::parse(eps_str), seed, sampling_constant, repetitions,
                    out_path);
  });

  CLI::App* za = app.add_subcommand("zono-approx-max", "(1+eps)-approximate norm maximum");
  za->add_option("zonotope", z_path, "zonotope JSON")->required();
  za->add_option("--p", p_str, "norm")->capture_default_str();
  add_seeded(za);
  add_out(za);
  za->callback([&] {
    if (!za->count("--seed")) seed = fresh_seed();
    run_zono_approx_max(z_path, PNorm::parse(p_str), Rational::parse(eps_str), seed,
                        sampling_constant, repetitions, out_path);
  });

  CLI::App* gc = app.add_subcommand("gen-clique-instance",
                                    "multicolored-clique hardness instance from a graph");
  gc->add_option("graph", graph_path, "colored graph JSON")->required();
  gc->add_option("--kind", kind, "raw-sum | positivity | lipschitz")->capture_default_str();
  gc->add_option("--p", p_str, "norm (lipschitz kind only)")->capture_default_str();
  add_out(gc);
  gc->callback([&] { run_gen_clique_instance(graph_path, kind, PNorm::parse(p_str), out_path); });

  CLI::App* sc = app.add_subcommand("solve-clique", "brute-force multicolored clique");
  sc->add_option("graph", graph_path, "colored graph JSON")->required();
  add_out(sc);
  sc->callback([&] { run_solve_clique(graph_path, out_path); });

  CLI::App* bn = app.add_subcommand("bench", "cell/vertex counting scaling table (JSON Lines)");
  bn->add_option("--kind", kind, "cells | vertices")->required();
  bn->add_option("--d-min", d_min, "")->capture_default_str();
  bn->add_option("--d-max", d_max, "")->capture_default_str();
  bn->add_option("--n-min", n_min, "")->capture_default_str();
  bn->add_option("--n-max", n_max, "")->capture_default_str();
  bn->add_option("--seed", seed, "RNG seed (fresh one drawn when omitted)");
  bn->add_option("-o,--output", out_path, "append JSON Lines here instead of stdout");
  bn->callback([&] {
    if (!bn->count("--seed")) seed = fresh_seed();
    run_bench(kind, d_min, d_max, n_min, n_max, seed, out_path);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const resource_error& e) {
    std::cerr << "resource guard: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
