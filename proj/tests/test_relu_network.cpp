#include <catch2/catch_amalgamated.hpp>

#include <zv/relu_network.hpp>

#include "support/random_gen.hpp"

#include <random>
#include <set>

using namespace zv;

namespace {

Rational relu(const Rational& t) { return t.sign() > 0 ? t : Rational(0); }

ReluNetwork make_2layer(const std::vector<std::pair<RVector, Rational>>& neurons, RVector c,
                        Rational b) {
  const std::size_t d = neurons.front().first.size();
  RMatrix w(neurons.size(), d);
  RVector bias(neurons.size());
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) w(i, j) = neurons[i].first[j];
    bias[i] = neurons[i].second;
  }
  return ReluNetwork({{std::move(w), std::move(bias)}}, std::move(c), std::move(b));
}

// f(x) = max(0,2x-1) - max(0,4x-4) + max(0,2x-3) + 4
ReluNetwork fig2_network() {
  return make_2layer({{RVector{Rational(2)}, Rational(-1)},
                      {RVector{Rational(4)}, Rational(-4)},
                      {RVector{Rational(2)}, Rational(-3)}},
                     RVector{Rational(1), Rational(-1), Rational(1)}, Rational(4));
}

ReluNetwork random_2layer(std::mt19937_64& rng, std::size_t d, std::size_t n,
                          bool bias_free = false) {
  std::vector<std::pair<RVector, Rational>> neurons;
  for (std::size_t i = 0; i < n; ++i)
    neurons.emplace_back(zvtest::rand_nonzero_vector(rng, d, 4, 2),
                         bias_free ? Rational(0) : zvtest::rand_rational(rng, 4, 2));
  return make_2layer(neurons, zvtest::rand_vector(rng, n, 3, 2),
                     bias_free ? Rational(0) : zvtest::rand_rational(rng, 3, 2));
}

ReluNetwork random_3layer(std::mt19937_64& rng, std::size_t d, std::size_t n1, std::size_t n2) {
  RMatrix w1(n1, d), w2(n2, n1);
  RVector b1(n1), b2(n2);
  for (std::size_t i = 0; i < n1; ++i) {
    RVector r = zvtest::rand_nonzero_vector(rng, d, 3, 2);
    for (std::size_t j = 0; j < d; ++j) w1(i, j) = r[j];
    b1[i] = zvtest::rand_rational(rng, 3, 2);
  }
  for (std::size_t i = 0; i < n2; ++i) {
    RVector r = zvtest::rand_vector(rng, n1, 3, 2);
    for (std::size_t j = 0; j < n1; ++j) w2(i, j) = r[j];
    b2[i] = zvtest::rand_rational(rng, 3, 2);
  }
  return ReluNetwork({{std::move(w1), std::move(b1)}, {std::move(w2), std::move(b2)}},
                     zvtest::rand_vector(rng, n2, 3, 2), zvtest::rand_rational(rng, 3, 2));
}

} // namespace

TEST_CASE("relu: construction is validated", "[relu]") {
  RMatrix w(2, 3);
  REQUIRE_THROWS_AS(ReluNetwork({{w, RVector(1)}}, RVector(2), Rational(0)), input_error);
  REQUIRE_THROWS_AS(ReluNetwork({{w, RVector(2)}}, RVector(3), Rational(0)), input_error);
  REQUIRE_THROWS_AS(ReluNetwork({}, RVector(0), Rational(0)), input_error);
  REQUIRE_THROWS_AS(ReluNetwork({{RMatrix(1, 0), RVector(1)}}, RVector(1), Rational(0)),
                    input_error);
}

TEST_CASE("relu: exact evaluation", "[relu]") {
  SECTION("reference single-input network") {
    ReluNetwork net = fig2_network();
    REQUIRE(evaluate(net, RVector{Rational(0)}) == Rational(4));
    REQUIRE(evaluate(net, RVector{Rational(2)}) == Rational(4));
    std::mt19937_64 rng(101);
    for (int t = 0; t < 50; ++t) {
      Rational x = zvtest::rand_rational(rng, 8, 5);
      Rational expect = relu(Rational(2) * x - Rational(1)) - relu(Rational(4) * x - Rational(4)) +
                        relu(Rational(2) * x - Rational(3)) + Rational(4);
      REQUIRE(evaluate(net, RVector{x}) == expect);
    }
  }
  SECTION("zero network") {
    ReluNetwork z = make_2layer({{RVector{Rational(0), Rational(0)}, Rational(0)}},
                                RVector{Rational(0)}, Rational(0));
    std::mt19937_64 rng(102);
    for (int t = 0; t < 10; ++t)
      REQUIRE(evaluate(z, zvtest::rand_vector(rng, 2, 9, 4)) == Rational(0));
  }
  SECTION("positive homogeneity of bias-free networks") {
    std::mt19937_64 rng(103);
    ReluNetwork net = random_2layer(rng, 3, 4, true);
    for (const Rational& lam : {Rational(0), Rational(1, 2), Rational(3), Rational(7, 2)}) {
      RVector x = zvtest::rand_vector(rng, 3, 6, 3);
      RVector lx = x;
      lx *= lam;
      REQUIRE(evaluate(net, lx) == lam * evaluate(net, x));
    }
  }
}

TEST_CASE("relu: 2-layer linear regions", "[relu]") {
  SECTION("single neuron") {
    ReluNetwork net = make_2layer({{RVector{Rational(1)}, Rational(0)}}, RVector{Rational(1)},
                                  Rational(0));
    auto pieces = linear_regions(net);
    REQUIRE(pieces.size() == 2);
    // Sorted by sign vector: the inactive piece (sign -) comes first.
    REQUIRE(pieces[0].gradient == RVector{Rational(0)});
    REQUIRE(pieces[1].gradient == RVector{Rational(1)});
    REQUIRE(pieces[1].offset == Rational(0));
  }
  SECTION("generic neuron count in the plane") {
    std::mt19937_64 rng(202);
    // Hand-picked generic neurons: no two parallel, no three concurrent.
    auto net = make_2layer({{RVector{Rational(1), Rational(0)}, Rational(0)},
                            {RVector{Rational(0), Rational(1)}, Rational(1)},
                            {RVector{Rational(1), Rational(1)}, Rational(-3)},
                            {RVector{Rational(1), Rational(-2)}, Rational(7)}},
                           zvtest::rand_vector(rng, 4, 3, 2), zvtest::rand_rational(rng, 3, 2));
    auto pieces = linear_regions(net);
    REQUIRE(pieces.size() == 1 + 4 + 6);
    for (const auto& p : pieces) {
      REQUIRE(p.region.contains_strictly(p.witness));
      REQUIRE(evaluate(net, p.witness) == dot(p.gradient, p.witness) + p.offset);
    }
  }
  SECTION("pieces cover the input space") {
    std::mt19937_64 rng(203);
    ReluNetwork net = random_2layer(rng, 2, 5);
    auto pieces = linear_regions(net);
    for (int t = 0; t < 40; ++t) {
      RVector x = zvtest::rand_vector(rng, 2, 10, 7);
      int hits = 0;
      for (const auto& p : pieces)
        if (p.region.contains(x)) {
          ++hits;
          REQUIRE(evaluate(net, x) == dot(p.gradient, x) + p.offset);
        }
      REQUIRE(hits >= 1);
    }
  }
  SECTION("repeated and antiparallel neurons collapse") {
    auto net = make_2layer({{RVector{Rational(1)}, Rational(0)},
                            {RVector{Rational(2)}, Rational(0)},
                            {RVector{Rational(-1)}, Rational(0)}},
                           RVector{Rational(1), Rational(1), Rational(2)}, Rational(0));
    // f(x) = max(0,x) + max(0,2x) + 2 max(0,-x)  ->  3x for x>0, -2x for x<0.
    auto pieces = linear_regions(net);
    REQUIRE(pieces.size() == 2);
    REQUIRE(pieces[0].gradient == RVector{Rational(-2)});
    REQUIRE(pieces[1].gradient == RVector{Rational(3)});
  }
  SECTION("constant neurons contribute constants") {
    auto net = make_2layer({{RVector{Rational(0)}, Rational(2)},
                            {RVector{Rational(0)}, Rational(-5)},
                            {RVector{Rational(1)}, Rational(0)}},
                           RVector{Rational(3), Rational(1), Rational(1)}, Rational(1));
    // f(x) = 3 max(0,2) + max(0,-5) + max(0,x) + 1 = max(0,x) + 7.
    auto pieces = linear_regions(net);
    REQUIRE(pieces.size() == 2);
    REQUIRE(pieces[0].offset == Rational(7));
    REQUIRE(pieces[1].gradient == RVector{Rational(1)});
    REQUIRE(pieces[1].offset == Rational(7));
  }
}

TEST_CASE("relu: 3-layer linear regions", "[relu]") {
  SECTION("max(0, max(0,x) - 1)") {
    RMatrix w1(1, 1), w2(1, 1);
    w1(0, 0) = Rational(1);
    w2(0, 0) = Rational(1);
    ReluNetwork net({{w1, RVector(1)}, {w2, RVector{Rational(-1)}}}, RVector{Rational(1)},
                    Rational(0));
    auto pieces = linear_regions(net);
    REQUIRE(pieces.size() == 3);
    std::multiset<Rational> grads;
    for (const auto& p : pieces) grads.insert(p.gradient[0]);
    REQUIRE(grads == std::multiset<Rational>{Rational(0), Rational(0), Rational(1)});
  }
  SECTION("random nets: pieces match the forward pass and cover space") {
    std::mt19937_64 rng(303);
    for (int t = 0; t < 6; ++t) {
      ReluNetwork net = random_3layer(rng, 2, 3, 2);
      auto pieces = linear_regions(net);
      REQUIRE_FALSE(pieces.empty());
      for (const auto& p : pieces)
        REQUIRE(evaluate(net, p.witness) == dot(p.gradient, p.witness) + p.offset);
      for (int s = 0; s < 15; ++s) {
        RVector x = zvtest::rand_vector(rng, 2, 8, 5);
        int hits = 0;
        for (const auto& p : pieces)
          if (p.region.contains(x)) {
            ++hits;
            REQUIRE(evaluate(net, x) == dot(p.gradient, x) + p.offset);
          }
        REQUIRE(hits >= 1);
      }
    }
  }
  SECTION("deeper networks are rejected") {
    RMatrix w(1, 1);
    w(0, 0) = Rational(1);
    ReluNetwork deep({{w, RVector(1)}, {w, RVector(1)}, {w, RVector(1)}}, RVector{Rational(1)},
                     Rational(0));
    REQUIRE_THROWS_AS(linear_regions(deep), input_error);
  }
}

TEST_CASE("relu: homogenization", "[relu]") {
  ReluNetwork net = fig2_network();
  ReluNetwork h = homogenize(net);
  REQUIRE(h.input_dim() == 2);
  REQUIRE(h.bias_free());

  SECTION("matches the closed form") {
    std::mt19937_64 rng(404);
    for (int t = 0; t < 60; ++t) {
      Rational x = zvtest::rand_rational(rng, 7, 4);
      Rational y = zvtest::rand_rational(rng, 7, 4);
      Rational expect = relu(Rational(2) * x - y) - relu(Rational(4) * x - Rational(4) * y) +
                        relu(Rational(2) * x - Rational(3) * y) + Rational(4) * y.abs();
      REQUIRE(evaluate(h, RVector{x, y}) == expect);
    }
  }
  SECTION("vanishes on the y=0 slice") {
    for (int i = -5; i <= 4; ++i)
      REQUIRE(evaluate(h, RVector{Rational(i, 2), Rational(0)}) == Rational(0));
  }
  SECTION("extends the original function at y=1") {
    std::mt19937_64 rng(405);
    for (int t = 0; t < 100; ++t) {
      Rational x = zvtest::rand_rational(rng, 9, 5);
      REQUIRE(evaluate(h, RVector{x, Rational(1)}) == evaluate(net, RVector{x}));
    }
  }
  SECTION("bias-free networks gain only inert neurons") {
    std::mt19937_64 rng(406);
    ReluNetwork bf = random_2layer(rng, 2, 3, true);
    ReluNetwork hb = homogenize(bf);
    REQUIRE(hb.layer(0).weights.rows() == 5);
    REQUIRE(hb.output_weights()[3] == Rational(0));
    REQUIRE(hb.output_weights()[4] == Rational(0));
    for (int t = 0; t < 20; ++t) {
      RVector x = zvtest::rand_vector(rng, 2, 6, 3);
      Rational y = zvtest::rand_rational(rng, 6, 3);
      REQUIRE(evaluate(hb, RVector{x[0], x[1], y}) == evaluate(bf, x));
    }
  }
  SECTION("requires exactly one hidden layer") {
    std::mt19937_64 rng(407);
    REQUIRE_THROWS_AS(homogenize(random_3layer(rng, 1, 2, 2)), input_error);
  }
}

TEST_CASE("relu: homogenization symmetry defect", "[relu]") {
  SECTION("single shifted neuron") {
    auto net = make_2layer({{RVector{Rational(1)}, Rational(1)}}, RVector{Rational(1)},
                           Rational(0));
    REQUIRE(homogenization_symmetry_defect(net, RVector{Rational(0)}) == Rational(1));
  }
  SECTION("cancelling pair") {
    auto net = make_2layer({{RVector{Rational(1)}, Rational(1)},
                            {RVector{Rational(1)}, Rational(1)}},
                           RVector{Rational(1), Rational(-1)}, Rational(0));
    std::mt19937_64 rng(505);
    for (int t = 0; t < 10; ++t)
      REQUIRE(homogenization_symmetry_defect(net, zvtest::rand_vector(rng, 1, 9, 4)) ==
              Rational(0));
  }
  SECTION("random networks match the linear formula") {
    std::mt19937_64 rng(506);
    for (int t = 0; t < 20; ++t) {
      ReluNetwork net = random_2layer(rng, 3, 4);
      RVector x = zvtest::rand_vector(rng, 3, 6, 3);
      Rational expect;
      for (std::size_t i = 0; i < 4; ++i)
        expect += net.output_weights()[i] *
                  (dot(net.layer(0).weights.row(i), x) + net.layer(0).biases[i]);
      REQUIRE(homogenization_symmetry_defect(net, x) == expect);
    }
  }
}

TEST_CASE("relu: zonotope pair duality", "[relu]") {
  SECTION("direct reading of the definition") {
    auto g = make_2layer({{RVector{Rational(1), Rational(0)}, Rational(0)},
                          {RVector{Rational(1), Rational(1)}, Rational(0)}},
                         RVector{Rational(1), Rational(-1)}, Rational(0));
    ZonotopePair pair = to_zonotope_pair(g);
    REQUIRE(pair.plus.generator_count() == 1);
    REQUIRE(pair.plus.generator(0) == RVector{Rational(1), Rational(0)});
    REQUIRE(pair.minus.generator_count() == 1);
    REQUIRE(pair.minus.generator(0) == RVector{Rational(1), Rational(1)});
  }
  SECTION("no negative neurons") {
    auto g = make_2layer({{RVector{Rational(2), Rational(1)}, Rational(0)}},
                         RVector{Rational(1)}, Rational(0));
    REQUIRE(to_zonotope_pair(g).minus.generator_count() == 0);
  }
  SECTION("output weights fold into generators") {
    auto g = make_2layer({{RVector{Rational(1), Rational(0)}, Rational(0)}},
                         RVector{Rational(-3)}, Rational(0));
    ZonotopePair pair = to_zonotope_pair(g);
    REQUIRE(pair.minus.generator(0) == RVector{Rational(3), Rational(0)});
  }
  SECTION("round trip preserves the function") {
    std::mt19937_64 rng(606);
    for (int t = 0; t < 5; ++t) {
      ReluNetwork net = random_2layer(rng, 2, 4, true);
      ReluNetwork back = from_zonotope_pair(to_zonotope_pair(net));
      ZonotopePair pair = to_zonotope_pair(net);
      for (int s = 0; s < 100; ++s) {
        RVector x = zvtest::rand_vector(rng, 2, 8, 5);
        REQUIRE(evaluate(net, x) == evaluate(back, x));
        REQUIRE(evaluate(net, x) == support(pair.plus, x).first - support(pair.minus, x).first);
      }
    }
  }
  SECTION("identical zonotopes give the zero function") {
    auto z = Zonotope::from_columns(2, {RVector{Rational(1), Rational(2)},
                                        RVector{Rational(3), Rational(-1)}});
    ReluNetwork net = from_zonotope_pair({z, z});
    std::mt19937_64 rng(607);
    for (int t = 0; t < 20; ++t)
      REQUIRE(evaluate(net, zvtest::rand_vector(rng, 2, 9, 4)) == Rational(0));
  }
  SECTION("single-generator pair") {
    auto plus = Zonotope::from_columns(1, {RVector{Rational(1)}});
    auto minus = Zonotope::from_columns(1, {});
    ReluNetwork net = from_zonotope_pair({plus, minus});
    REQUIRE(evaluate(net, RVector{Rational(3)}) == Rational(3));
    REQUIRE(evaluate(net, RVector{Rational(-3)}) == Rational(0));
  }
  SECTION("preconditions enforced") {
    auto biased = make_2layer({{RVector{Rational(1)}, Rational(1)}}, RVector{Rational(1)},
                              Rational(0));
    REQUIRE_THROWS_AS(to_zonotope_pair(biased), input_error);
    auto offcenter = Zonotope::from_columns(1, {RVector{Rational(1)}}, RVector{Rational(1)});
    REQUIRE_THROWS_AS(from_zonotope_pair({offcenter, offcenter}), input_error);
  }
}

TEST_CASE("relu: lift to three layers", "[relu]") {
  SECTION("negative constant lifts to zero") {
    auto net = make_2layer({{RVector{Rational(1)}, Rational(0)}}, RVector{Rational(0)},
                           Rational(-1));
    ReluNetwork lifted = lift_to_3layer(net);
    REQUIRE(lifted.hidden_layer_count() == 2);
    std::mt19937_64 rng(707);
    for (int t = 0; t < 15; ++t)
      REQUIRE(evaluate(lifted, zvtest::rand_vector(rng, 1, 9, 4)) == Rational(0));
  }
  SECTION("identity lifts to relu") {
    auto net = make_2layer({{RVector{Rational(1)}, Rational(0)},
                            {RVector{Rational(-1)}, Rational(0)}},
                           RVector{Rational(1), Rational(-1)}, Rational(0));
    ReluNetwork lifted = lift_to_3layer(net);
    REQUIRE(evaluate(lifted, RVector{Rational(5)}) == Rational(5));
    REQUIRE(evaluate(lifted, RVector{Rational(-5)}) == Rational(0));
  }
  SECTION("lift computes max(0, f) for random networks") {
    std::mt19937_64 rng(708);
    for (int t = 0; t < 6; ++t) {
      ReluNetwork net = random_2layer(rng, 2, 4);
      ReluNetwork lifted = lift_to_3layer(net);
      for (int s = 0; s < 30; ++s) {
        RVector x = zvtest::rand_vector(rng, 2, 8, 5);
        REQUIRE(evaluate(lifted, x) == relu(evaluate(net, x)));
      }
      // The 3-layer decomposition of the lift stays consistent.
      for (const auto& p : linear_regions(lifted))
        REQUIRE(evaluate(lifted, p.witness) == dot(p.gradient, p.witness) + p.offset);
    }
  }
}
