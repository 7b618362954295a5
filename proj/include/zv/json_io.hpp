#pragma once

// JSON encodings for the library's value types.  Rationals travel as strings
// "p/q" (the "/q" omitted when q = 1); vectors and matrix rows are arrays of
// such strings; zonotope generator lists are column-major.  Every parse
// failure raises input_error whose message starts with a JSON-pointer-style
// location of the offending element.

#include <zv/errors.hpp>
#include <zv/linalg.hpp>
#include <zv/polyhedron.hpp>
#include <zv/reduce.hpp>
#include <zv/relu_network.hpp>
#include <zv/zonotope.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace zv {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void json_fail(const std::string& at, const std::string& what) {
  throw input_error((at.empty() ? std::string("/") : at) + ": " + what);
}

inline const Json& member(const Json& j, const std::string& at, const char* key) {
  if (!j.is_object()) json_fail(at, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) json_fail(at, std::string("missing key \"") + key + "\"");
  return *it;
}

inline const Json* optional_member(const Json& j, const std::string& at, const char* key) {
  if (!j.is_object()) json_fail(at, "expected an object");
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

inline void expect_array(const Json& j, const std::string& at) {
  if (!j.is_array()) json_fail(at, "expected an array");
}

inline std::string child(const std::string& at, const char* key) {
  return at + "/" + key;
}

inline std::string child(const std::string& at, std::size_t i) {
  return at + "/" + std::to_string(i);
}

inline long long integer_from_json(const Json& j, const std::string& at) {
  if (!j.is_number_integer()) json_fail(at, "expected an integer");
  return j.get<long long>();
}

} // namespace detail

// ---------- scalars and linear algebra ----------

inline Json rational_to_json(const Rational& r) { return Json(r.str()); }

inline Rational rational_from_json(const Json& j, const std::string& at = "") {
  if (!j.is_string()) detail::json_fail(at, "expected a rational string \"p/q\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const input_error& e) {
    detail::json_fail(at, e.what());
  }
}

inline Json vector_to_json(const RVector& v) {
  Json a = Json::array();
  for (std::size_t i = 0; i < v.size(); ++i) a.push_back(v[i].str());
  return a;
}

inline RVector vector_from_json(const Json& j, const std::string& at = "") {
  detail::expect_array(j, at);
  RVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v[i] = rational_from_json(j[i], detail::child(at, i));
  return v;
}

inline Json matrix_to_json(const RMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_to_json(m.row(i)));
  return a;
}

// Row-major; all rows must have equal length.
inline RMatrix matrix_from_json(const Json& j, const std::string& at = "") {
  detail::expect_array(j, at);
  if (j.empty()) return RMatrix(0, 0);
  std::vector<RVector> rows;
  rows.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    rows.push_back(vector_from_json(j[i], detail::child(at, i)));
    if (rows.back().size() != rows.front().size())
      detail::json_fail(detail::child(at, i), "ragged matrix row");
  }
  RMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < rows[i].size(); ++c) m(i, c) = rows[i][c];
  return m;
}

// ---------- polyhedron: { "A": [[...]], "b": [...] } ----------

inline Json polyhedron_to_json(const Polyhedron& p) {
  Json a = Json::array(), b = Json::array();
  for (const auto& [row, beta] : p.rows) {
    a.push_back(vector_to_json(row));
    b.push_back(beta.str());
  }
  return Json{{"A", a}, {"b", b}, {"dim", p.dim}};
}

// "dim" is optional when A has at least one row.
inline Polyhedron polyhedron_from_json(const Json& j, const std::string& at = "") {
  const RMatrix a = matrix_from_json(detail::member(j, at, "A"), detail::child(at, "A"));
  const RVector b = vector_from_json(detail::member(j, at, "b"), detail::child(at, "b"));
  if (a.rows() != b.size()) detail::json_fail(at, "A and b disagree on the number of rows");
  std::size_t dim = a.rows() > 0 ? a.cols() : 0;
  if (const Json* d = detail::optional_member(j, at, "dim")) {
    const long long v = detail::integer_from_json(*d, detail::child(at, "dim"));
    if (v < 0) detail::json_fail(detail::child(at, "dim"), "negative dimension");
    if (a.rows() > 0 && static_cast<std::size_t>(v) != a.cols())
      detail::json_fail(detail::child(at, "dim"), "dimension disagrees with A");
    dim = static_cast<std::size_t>(v);
  }
  Polyhedron p(dim);
  for (std::size_t i = 0; i < a.rows(); ++i) p.add_row(a.row(i), b[i]);
  return p;
}

// ---------- zonotope: { "generators": [[col], ...], "center": [...] } ----------

inline Json zonotope_to_json(const Zonotope& z) {
  Json gens = Json::array();
  for (std::size_t jx = 0; jx < z.generator_count(); ++jx)
    gens.push_back(vector_to_json(z.generator(jx)));
  return Json{{"generators", gens}, {"center", vector_to_json(z.center())}};
}

inline Zonotope zonotope_from_json(const Json& j, const std::string& at = "") {
  const RVector center =
      vector_from_json(detail::member(j, at, "center"), detail::child(at, "center"));
  const Json& gens = detail::member(j, at, "generators");
  detail::expect_array(gens, detail::child(at, "generators"));
  RMatrix m(center.size(), gens.size());
  for (std::size_t g = 0; g < gens.size(); ++g) {
    const std::string gat = detail::child(detail::child(at, "generators"), g);
    const RVector col = vector_from_json(gens[g], gat);
    if (col.size() != center.size())
      detail::json_fail(gat, "generator dimension disagrees with center");
    for (std::size_t c = 0; c < col.size(); ++c) m(c, g) = col[c];
  }
  return Zonotope(m, center);
}

// ---------- network ----------
// { "layers": [ { "weights": [[...]], "biases": [...] }, ... ],
//   "output": { "weights": [...], "bias": "p/q" } }

inline Json network_to_json(const ReluNetwork& net) {
  Json layers = Json::array();
  for (std::size_t i = 0; i < net.hidden_layer_count(); ++i)
    layers.push_back(Json{{"weights", matrix_to_json(net.layer(i).weights)},
                          {"biases", vector_to_json(net.layer(i).biases)}});
  return Json{{"layers", layers},
              {"output", Json{{"weights", vector_to_json(net.output_weights())},
                              {"bias", net.output_bias().str()}}}};
}

inline ReluNetwork network_from_json(const Json& j, const std::string& at = "") {
  const Json& jlayers = detail::member(j, at, "layers");
  detail::expect_array(jlayers, detail::child(at, "layers"));
  std::vector<HiddenLayer> layers;
  layers.reserve(jlayers.size());
  for (std::size_t i = 0; i < jlayers.size(); ++i) {
    const std::string lat = detail::child(detail::child(at, "layers"), i);
    RMatrix w = matrix_from_json(detail::member(jlayers[i], lat, "weights"),
                                 detail::child(lat, "weights"));
    RVector b = vector_from_json(detail::member(jlayers[i], lat, "biases"),
                                 detail::child(lat, "biases"));
    if (w.rows() != b.size())
      detail::json_fail(lat, "weights and biases disagree on the number of neurons");
    layers.push_back({std::move(w), std::move(b)});
  }
  const Json& jout = detail::member(j, at, "output");
  const std::string oat = detail::child(at, "output");
  RVector ow = vector_from_json(detail::member(jout, oat, "weights"), detail::child(oat, "weights"));
  Rational ob = rational_from_json(detail::member(jout, oat, "bias"), detail::child(oat, "bias"));
  try {
    return ReluNetwork(std::move(layers), std::move(ow), std::move(ob));
  } catch (const input_error& e) {
    detail::json_fail(at, e.what());
  }
}

// ---------- colored graph: { "colors": [[ids], ...], "edges": [[u, v], ...] } ----------

inline Json graph_to_json(const ColoredGraph& g) {
  Json colors = Json::array();
  for (const auto& cls : g.color_classes) colors.push_back(cls);
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges) edges.push_back(Json::array({u, v}));
  return Json{{"colors", colors}, {"edges", edges}};
}

inline ColoredGraph graph_from_json(const Json& j, const std::string& at = "") {
  ColoredGraph g;
  const Json& colors = detail::member(j, at, "colors");
  detail::expect_array(colors, detail::child(at, "colors"));
  for (std::size_t c = 0; c < colors.size(); ++c) {
    const std::string cat = detail::child(detail::child(at, "colors"), c);
    detail::expect_array(colors[c], cat);
    std::vector<int> cls;
    for (std::size_t i = 0; i < colors[c].size(); ++i)
      cls.push_back(static_cast<int>(detail::integer_from_json(colors[c][i], detail::child(cat, i))));
    g.color_classes.push_back(std::move(cls));
  }
  const Json& edges = detail::member(j, at, "edges");
  detail::expect_array(edges, detail::child(at, "edges"));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::string eat = detail::child(detail::child(at, "edges"), e);
    detail::expect_array(edges[e], eat);
    if (edges[e].size() != 2) detail::json_fail(eat, "edge must be a pair [u, v]");
    g.edges.emplace_back(static_cast<int>(detail::integer_from_json(edges[e][0], detail::child(eat, std::size_t(0)))),
                         static_cast<int>(detail::integer_from_json(edges[e][1], detail::child(eat, std::size_t(1)))));
  }
  return g;
}

// ---------- hardness instance: network plus construction metadata ----------

inline const char* instance_kind_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::RawSum: return "raw-sum";
    case InstanceKind::Positivity: return "positivity";
    case InstanceKind::Lipschitz: return "lipschitz";
  }
  throw internal_error("instance_kind_name: unknown kind");
}

inline InstanceKind instance_kind_from_name(const std::string& s, const std::string& at = "") {
  if (s == "raw-sum") return InstanceKind::RawSum;
  if (s == "positivity") return InstanceKind::Positivity;
  if (s == "lipschitz") return InstanceKind::Lipschitz;
  detail::json_fail(at, "unknown instance kind \"" + s + "\"");
}

inline std::string pnorm_to_string(const PNorm& p) {
  switch (p.kind) {
    case PNorm::Kind::One: return "1";
    case PNorm::Kind::Two: return "2";
    case PNorm::Kind::Inf: return "inf";
    case PNorm::Kind::General: return p.q.str();
  }
  throw internal_error("pnorm_to_string: unknown kind");
}

inline Json instance_to_json(const HardnessInstance& inst) {
  Json labels = Json::array();
  for (const auto& cls : inst.labels.classes) labels.push_back(cls);
  Json j{{"network", network_to_json(inst.network)},
         {"kind", instance_kind_name(inst.kind)},
         {"k", inst.k},
         {"graph", graph_to_json(inst.graph)},
         {"labels", labels}};
  if (inst.p) j["p"] = pnorm_to_string(*inst.p);
  if (inst.epsilon) j["epsilon"] = inst.epsilon->str();
  if (inst.threshold) j["threshold"] = inst.threshold->str();
  return j;
}

inline HardnessInstance instance_from_json(const Json& j, const std::string& at = "") {
  HardnessInstance inst{network_from_json(detail::member(j, at, "network"),
                                          detail::child(at, "network")),
                        InstanceKind::RawSum,
                        {},
                        {},
                        0,
                        {},
                        {},
                        {}};
  const Json& jkind = detail::member(j, at, "kind");
  if (!jkind.is_string()) detail::json_fail(detail::child(at, "kind"), "expected a string");
  inst.kind = instance_kind_from_name(jkind.get<std::string>(), detail::child(at, "kind"));
  const long long k = detail::integer_from_json(detail::member(j, at, "k"), detail::child(at, "k"));
  if (k <= 0) detail::json_fail(detail::child(at, "k"), "k must be positive");
  inst.k = static_cast<std::size_t>(k);
  inst.graph = graph_from_json(detail::member(j, at, "graph"), detail::child(at, "graph"));
  const Json& jlabels = detail::member(j, at, "labels");
  const std::string lat = detail::child(at, "labels");
  detail::expect_array(jlabels, lat);
  if (jlabels.size() != inst.graph.color_classes.size())
    detail::json_fail(lat, "one label list per color class required");
  for (std::size_t c = 0; c < jlabels.size(); ++c) {
    const std::string cat = detail::child(lat, c);
    detail::expect_array(jlabels[c], cat);
    if (jlabels[c].size() != inst.graph.color_classes[c].size())
      detail::json_fail(cat, "label count disagrees with the color class size");
    std::vector<long long> cls;
    for (std::size_t i = 0; i < jlabels[c].size(); ++i) {
      const long long w = detail::integer_from_json(jlabels[c][i], detail::child(cat, i));
      if (w <= 0) detail::json_fail(detail::child(cat, i), "labels must be positive");
      cls.push_back(w);
      inst.labels.omega[inst.graph.color_classes[c][i]] = w;
      inst.labels.max_label = std::max(inst.labels.max_label, w);
    }
    inst.labels.classes.push_back(std::move(cls));
  }
  std::size_t node_count = 0;
  for (const auto& cls : inst.graph.color_classes) node_count += cls.size();
  if (inst.labels.omega.size() != node_count)
    detail::json_fail(lat, "duplicate node ids across label lists");
  if (const Json* p = detail::optional_member(j, at, "p")) {
    if (!p->is_string()) detail::json_fail(detail::child(at, "p"), "expected a p-norm string");
    try {
      inst.p = PNorm::parse(p->get<std::string>());
    } catch (const input_error& e) {
      detail::json_fail(detail::child(at, "p"), e.what());
    }
  }
  if (const Json* e = detail::optional_member(j, at, "epsilon"))
    inst.epsilon = rational_from_json(*e, detail::child(at, "epsilon"));
  if (const Json* t = detail::optional_member(j, at, "threshold"))
    inst.threshold = rational_from_json(*t, detail::child(at, "threshold"));
  return inst;
}

// ---------- files ----------

inline Json parse_json_text(const std::string& text, const std::string& origin = "<input>") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw input_error(origin + ": " + e.what());
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

inline void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot open \"" + path + "\" for writing");
  out << j.dump(2) << '\n';
  if (!out) throw input_error("failed writing \"" + path + "\"");
}

} // namespace zv
