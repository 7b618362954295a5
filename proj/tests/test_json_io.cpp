#include <catch2/catch_amalgamated.hpp>

#include <zv/errors.hpp>
#include <zv/json_io.hpp>
#include <zv/reduce.hpp>

#include "support/random_gen.hpp"

#include <random>
#include <string>

using namespace zv;

namespace {

bool same_network(const ReluNetwork& a, const ReluNetwork& b) {
  if (a.hidden_layer_count() != b.hidden_layer_count()) return false;
  for (std::size_t i = 0; i < a.hidden_layer_count(); ++i) {
    if (!(a.layer(i).weights == b.layer(i).weights)) return false;
    if (a.layer(i).biases != b.layer(i).biases) return false;
  }
  return a.output_weights() == b.output_weights() && a.output_bias() == b.output_bias();
}

bool same_zonotope(const Zonotope& a, const Zonotope& b) {
  if (a.dim() != b.dim() || a.generator_count() != b.generator_count()) return false;
  if (a.center() != b.center()) return false;
  for (std::size_t j = 0; j < a.generator_count(); ++j)
    if (a.generator(j) != b.generator(j)) return false;
  return true;
}

// Error message must start with the JSON-pointer location.
void require_pointered(const std::function<void()>& f, const std::string& pointer) {
  try {
    f();
    FAIL("expected input_error at " << pointer);
  } catch (const input_error& e) {
    REQUIRE(std::string(e.what()).rfind(pointer + ":", 0) == 0);
  }
}

ColoredGraph triangle() {
  return {{{1}, {2}, {3}}, {{1, 2}, {1, 3}, {2, 3}}};
}

} // namespace

TEST_CASE("json: rational strings round-trip", "[json]") {
  REQUIRE(rational_from_json(Json("3/4")) == Rational(3, 4));
  REQUIRE(rational_from_json(Json("-7")) == Rational(-7));
  REQUIRE(rational_to_json(Rational(3, 4)) == Json("3/4"));
  REQUIRE(rational_to_json(Rational(5)) == Json("5"));
  require_pointered([] { rational_from_json(Json(7), "/x"); }, "/x");
  require_pointered([] { rational_from_json(Json("3/0"), "/x"); }, "/x");
  require_pointered([] { rational_from_json(Json("a/b")); }, "/");
}

TEST_CASE("json: vectors and matrices round-trip", "[json]") {
  std::mt19937_64 rng(20250408);
  const RVector v = zvtest::rand_vector(rng, 5);
  REQUIRE(vector_from_json(vector_to_json(v)) == v);

  RMatrix m(3, 2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) m(i, j) = zvtest::rand_rational(rng);
  REQUIRE(matrix_from_json(matrix_to_json(m)) == m);

  require_pointered([] { vector_from_json(Json{{"a", 1}}, "/v"); }, "/v");
  require_pointered([] { matrix_from_json(parse_json_text(R"([["1","2"],["3"]])"), ""); }, "/1");
  require_pointered([] { vector_from_json(parse_json_text(R"(["1", 2])"), ""); }, "/1");
}

TEST_CASE("json: polyhedron round-trip", "[json]") {
  const Polyhedron box = Polyhedron::box(2, Rational(-1), Rational(1));
  const Polyhedron back = polyhedron_from_json(polyhedron_to_json(box));
  REQUIRE(back.dim == box.dim);
  REQUIRE(back.rows == box.rows);

  SECTION("empty system keeps its dimension") {
    const Polyhedron whole(4);
    const Polyhedron back2 = polyhedron_from_json(polyhedron_to_json(whole));
    REQUIRE(back2.dim == 4);
    REQUIRE(back2.row_count() == 0);
  }
  SECTION("row count mismatch is pointered") {
    require_pointered(
        [] {
          polyhedron_from_json(parse_json_text(R"({"A": [["1","0"]], "b": []})"), "");
        },
        "/");
  }
  SECTION("dim key must agree with A") {
    require_pointered(
        [] {
          polyhedron_from_json(
              parse_json_text(R"({"A": [["1","0"]], "b": ["1"], "dim": 3})"), "");
        },
        "/dim");
  }
}

TEST_CASE("json: zonotope round-trip", "[json]") {
  std::mt19937_64 rng(20250409);
  RMatrix gens(3, 6);
  for (std::size_t j = 0; j < 6; ++j) {
    const RVector g = zvtest::rand_nonzero_vector(rng, 3);
    for (std::size_t c = 0; c < 3; ++c) gens(c, j) = g[c];
  }
  const Zonotope z(gens, zvtest::rand_vector(rng, 3));
  REQUIRE(same_zonotope(zonotope_from_json(zonotope_to_json(z)), z));

  require_pointered(
      [] {
        zonotope_from_json(
            parse_json_text(R"({"generators": [["1","0"],["1"]], "center": ["0","0"]})"), "");
      },
      "/generators/1");
  require_pointered([] { zonotope_from_json(parse_json_text(R"({"center": ["0"]})"), ""); }, "/");
}

TEST_CASE("json: network round-trip", "[json]") {
  std::mt19937_64 rng(20250410);
  SECTION("random two- and three-layer networks") {
    for (int t = 0; t < 5; ++t) {
      const std::size_t d = static_cast<std::size_t>(zvtest::rand_int(rng, 1, 3));
      const std::size_t n1 = static_cast<std::size_t>(zvtest::rand_int(rng, 1, 4));
      std::vector<HiddenLayer> layers;
      RMatrix w1(n1, d);
      RVector b1(n1);
      for (std::size_t i = 0; i < n1; ++i) {
        const RVector row = zvtest::rand_vector(rng, d);
        for (std::size_t j = 0; j < d; ++j) w1(i, j) = row[j];
        b1[i] = zvtest::rand_rational(rng);
      }
      layers.push_back({w1, b1});
      std::size_t width = n1;
      if (t % 2 == 1) {
        const std::size_t n2 = static_cast<std::size_t>(zvtest::rand_int(rng, 1, 3));
        RMatrix w2(n2, n1);
        RVector b2(n2);
        for (std::size_t i = 0; i < n2; ++i) {
          const RVector row = zvtest::rand_vector(rng, n1);
          for (std::size_t j = 0; j < n1; ++j) w2(i, j) = row[j];
          b2[i] = zvtest::rand_rational(rng);
        }
        layers.push_back({w2, b2});
        width = n2;
      }
      const ReluNetwork net(layers, zvtest::rand_vector(rng, width), zvtest::rand_rational(rng));
      const ReluNetwork back = network_from_json(network_to_json(net));
      REQUIRE(same_network(back, net));
      for (int s = 0; s < 5; ++s) {
        const RVector x = zvtest::rand_vector(rng, d);
        REQUIRE(evaluate(back, x) == evaluate(net, x));
      }
    }
  }
  SECTION("shape errors are pointered") {
    require_pointered(
        [] {
          network_from_json(parse_json_text(
              R"({"layers": [{"weights": [["1","0"]], "biases": ["0","0"]}],
                  "output": {"weights": ["1"], "bias": "0"}})"));
        },
        "/layers/0");
    require_pointered(
        [] {
          network_from_json(parse_json_text(
              R"({"layers": [{"weights": [["1","0"]], "biases": ["0"]}],
                  "output": {"weights": ["1","1"], "bias": "0"}})"));
        },
        "/");
    require_pointered(
        [] { network_from_json(parse_json_text(R"({"layers": []})"), ""); }, "/");
  }
}

TEST_CASE("json: colored graph round-trip", "[json]") {
  const ColoredGraph g = triangle();
  const ColoredGraph back = graph_from_json(graph_to_json(g));
  REQUIRE(back.color_classes == g.color_classes);
  REQUIRE(back.edges == g.edges);

  require_pointered(
      [] { graph_from_json(parse_json_text(R"({"colors": [[1]], "edges": [[1,2,3]]})"), ""); },
      "/edges/0");
  require_pointered(
      [] { graph_from_json(parse_json_text(R"({"colors": [["a"]], "edges": []})"), ""); },
      "/colors/0/0");
}

TEST_CASE("json: hardness instances round-trip", "[json]") {
  SECTION("lipschitz instance keeps all metadata") {
    const HardnessInstance inst = clique_to_lipschitz_instance(triangle(), PNorm::inf());
    const Json j = instance_to_json(inst);
    const HardnessInstance back = instance_from_json(j);
    REQUIRE(same_network(back.network, inst.network));
    REQUIRE(back.kind == InstanceKind::Lipschitz);
    REQUIRE(back.k == 3);
    REQUIRE(back.graph.color_classes == inst.graph.color_classes);
    REQUIRE(back.graph.edges == inst.graph.edges);
    REQUIRE(back.labels.omega == inst.labels.omega);
    REQUIRE(back.labels.classes == inst.labels.classes);
    REQUIRE(back.labels.max_label == inst.labels.max_label);
    REQUIRE(back.p.has_value());
    REQUIRE(back.p->kind == PNorm::Kind::Inf);
    REQUIRE(back.epsilon == Rational(1, 144));
    REQUIRE(back.threshold == Rational(11, 288));
  }
  SECTION("positivity instance omits the lipschitz keys") {
    const HardnessInstance inst = clique_to_positivity_instance(triangle());
    const Json j = instance_to_json(inst);
    REQUIRE_FALSE(j.contains("p"));
    REQUIRE_FALSE(j.contains("epsilon"));
    REQUIRE_FALSE(j.contains("threshold"));
    const HardnessInstance back = instance_from_json(j);
    REQUIRE(same_network(back.network, inst.network));
    REQUIRE(back.kind == InstanceKind::Positivity);
    REQUIRE_FALSE(back.p.has_value());
    REQUIRE_FALSE(back.epsilon.has_value());
  }
  SECTION("general-exponent norms survive the round trip") {
    const HardnessInstance inst =
        clique_to_lipschitz_instance(triangle(), PNorm::general(Rational(1, 2)));
    const HardnessInstance back = instance_from_json(instance_to_json(inst));
    REQUIRE(back.p->kind == PNorm::Kind::General);
    REQUIRE(back.p->q == Rational(1, 2));
    REQUIRE(back.epsilon == Rational(1, 20736));
  }
  SECTION("text dump re-parses identically") {
    const HardnessInstance inst = clique_to_lipschitz_instance(triangle(), PNorm::one());
    const Json j = instance_to_json(inst);
    const Json again = parse_json_text(j.dump());
    REQUIRE(again == j);
  }
  SECTION("label shape violations are pointered") {
    const HardnessInstance inst = clique_to_positivity_instance(triangle());
    Json j = instance_to_json(inst);
    j["labels"] = Json::array({Json::array({1, 2})});
    require_pointered([&] { instance_from_json(j); }, "/labels");
    j = instance_to_json(inst);
    j["kind"] = "banana";
    require_pointered([&] { instance_from_json(j); }, "/kind");
  }
}

TEST_CASE("json: malformed text and files", "[json]") {
  REQUIRE_THROWS_AS(parse_json_text("{", "snippet"), input_error);
  REQUIRE_THROWS_AS(load_json_file("/nonexistent/path.json"), input_error);
}
