#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pla/errors.hpp"
#include "pla/graphs.hpp"
#include "pla/tremble.hpp"

using pla::OneStepArrow;
using pla::OneStepGraph;
using pla::WGraph;

namespace {

OneStepGraph hand_graph(std::size_t nodes,
                        std::vector<std::tuple<std::size_t, std::size_t, double>> arcs) {
  std::vector<OneStepArrow> arrows;
  for (auto [a, b, w] : arcs) arrows.push_back({a, b, 0, w, 1.0});
  return OneStepGraph(nodes, std::move(arrows));
}

}  // namespace

TEST_SUITE("graphs") {

TEST_CASE("one-step graph of a game") {
  const auto g = fixture::game({2, 2}, {{2, 1}, {1, 2}, {3, 1}, {1, 4}});
  const auto graph = pla::build_one_step_graph(g, 0.01);
  CHECK(graph.nodes() == 4);
  CHECK(graph.arrows().size() == 8);
  for (const auto& a : graph.arrows()) {
    std::size_t differing = 0;
    for (std::size_t i = 0; i < 2; ++i) {
      differing += g.space().action_of(a.from, i) != g.space().action_of(a.to, i);
    }
    CHECK(differing == 1);
    CHECK(g.space().action_of(a.from, a.deviator) != g.space().action_of(a.to, a.deviator));
    CHECK(a.weight == doctest::Approx(1.0 / (0.01 * g.utility(a.to, a.deviator))));
    CHECK(a.annotation ==
          doctest::Approx(std::exp(pla::eta(0.01) / (0.01 * g.utility(a.to, a.deviator)))));
  }
  // Player 0 deviates from (1,0) to (0,0), earning 2 there.
  const auto* arrow = graph.find(1, 0);
  REQUIRE(arrow != nullptr);
  CHECK(arrow->deviator == 0);
  CHECK(arrow->weight == doctest::Approx(50.0));
  CHECK(graph.find(0, 3) == nullptr);
  CHECK(graph.gamma() == std::vector<double>{0.25, 0.25});

  const auto doubled = pla::build_one_step_graph(g, 0.02);
  for (std::size_t k = 0; k < graph.arrows().size(); ++k) {
    CHECK(doubled.arrows()[k].weight == doctest::Approx(graph.arrows()[k].weight / 2));
  }

  // Arrow count is sum over states of sum_i (|A_i| - 1).
  const auto g3 = fixture::game({3, 2}, {{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}});
  CHECK(pla::build_one_step_graph(g3, 0.1).arrows().size() == 6 * (2 + 1));

  CHECK_THROWS_AS(pla::build_one_step_graph(g, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(pla::build_one_step_graph(g, 0.0), std::invalid_argument);
}

TEST_CASE("graph construction rejects malformed arrows") {
  CHECK_THROWS_AS(hand_graph(2, {{0, 0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(hand_graph(2, {{0, 1, 1.0}, {0, 1, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(hand_graph(2, {{0, 2, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(hand_graph(2, {{0, 1, 0.0}}), std::invalid_argument);
}

TEST_CASE("W-graph validator") {
  WGraph g = WGraph::rooted(3, 0);
  g.arrows = {{1, 0}, {2, 1}};
  CHECK_FALSE(pla::wgraph_violation(g).has_value());
  g.arrows = {{1, 2}, {2, 1}};
  CHECK(pla::wgraph_violation(g).has_value());
  g.arrows = {{1, 0}};
  CHECK(pla::wgraph_violation(g).has_value());
  g.arrows = {{1, 0}, {2, 0}, {0, 1}};
  CHECK(pla::wgraph_violation(g).has_value());
  g.arrows = {{1, 0}, {1, 2}, {2, 0}};
  CHECK(pla::wgraph_violation(g).has_value());
}

TEST_CASE("s-graph enumeration") {
  const auto full3 = hand_graph(3, {{0, 1, 1}, {1, 0, 1}, {0, 2, 1}, {2, 0, 1}, {1, 2, 1}, {2, 1, 1}});
  for (std::size_t root = 0; root < 3; ++root) {
    const auto all = pla::enumerate_s_graphs(full3, root);
    CHECK(all.size() == 3);
    for (const auto& g : all) CHECK_FALSE(pla::wgraph_violation(g).has_value());
  }
  const auto pair = hand_graph(2, {{0, 1, 1}, {1, 0, 1}});
  CHECK(pla::enumerate_s_graphs(pair, 0).size() == 1);
  CHECK(pla::enumerate_s_graphs(pair, 1).size() == 1);

  const auto line = hand_graph(3, {{1, 0, 1}, {2, 1, 1}});
  CHECK(pla::enumerate_s_graphs(line, 0).size() == 1);
  CHECK(pla::enumerate_s_graphs(line, 2).empty());

  // Complete digraph on n nodes has n^(n-2) rooted spanning trees per root.
  std::vector<std::tuple<std::size_t, std::size_t, double>> k5;
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b)
      if (a != b) k5.emplace_back(a, b, 1.0);
  CHECK(pla::enumerate_s_graphs(hand_graph(5, k5), 2).size() == 125);

  const auto g = fixture::game({2, 2, 3}, {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1},
                                           {1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1},
                                           {1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  CHECK_THROWS_AS(pla::enumerate_s_graphs(pla::build_one_step_graph(g, 0.1), 0),
                  pla::ResourceLimitError);
}

TEST_CASE("enumeration matches the odometer oracle") {
  oracle::Engine rng(21);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = oracle::pick(rng, 2, 6);
    const auto graph = oracle::random_digraph(rng, n, 0.4);
    const std::size_t root = oracle::pick(rng, 0, n - 1);
    std::vector<std::vector<std::size_t>> succ(n);
    for (const auto& a : graph.arrows()) succ[a.from].push_back(a.to);
    std::size_t expected = 0;
    oracle::all_rooted_graphs(succ, root, [&](const auto&) { ++expected; });
    CHECK(pla::enumerate_s_graphs(graph, root).size() == expected);
  }
}

TEST_CASE("graph resistance and gamma bar") {
  const auto g = fixture::game({2, 2}, {{1, 1}, {2, 1}, {1, 1}, {1, 1}});
  const auto graph = pla::build_one_step_graph(g, 0.1);
  WGraph empty = WGraph::rooted(4, 0);
  empty.target.assign(4, true);
  CHECK(pla::graph_resistance(empty, graph) == 0.0);

  // Destinations pay the deviator 1 and 2: 10 + 5.
  WGraph two = WGraph::rooted(4, 1);
  two.target[3] = true;
  two.arrows = {{0, 1}, {2, 0}};
  CHECK(pla::graph_resistance(two, graph) == doctest::Approx(15.0));
  CHECK(pla::gamma_bar(two, graph) == doctest::Approx(0.25 * 0.25));

  WGraph diagonal = WGraph::rooted(4, 0);
  diagonal.arrows = {{3, 0}};
  CHECK_THROWS_AS(pla::graph_resistance(diagonal, graph), std::invalid_argument);

  // Uniform utility: every {s}-graph has |S| - 1 arrows of weight 1/(eps u).
  const auto flat = fixture::game({2, 3}, {{2, 2}, {2, 2}, {2, 2}, {2, 2}, {2, 2}, {2, 2}});
  const auto fg = pla::build_one_step_graph(flat, 0.1);
  for (const auto& w : pla::enumerate_s_graphs(fg, 4)) {
    CHECK(pla::graph_resistance(w, fg) == doctest::Approx(5.0 * 5.0));
  }
}

TEST_CASE("minimum arborescence") {
  const auto pair = hand_graph(2, {{0, 1, 3.0}, {1, 0, 2.0}});
  CHECK(pla::min_resistance(pair, 0).phi_star == 2.0);
  CHECK(pla::min_resistance(pair, 1).phi_star == 3.0);

  const auto g = fixture::game({2, 2}, {{2, 2}, {2, 2}, {2, 2}, {2, 2}});
  const auto fg = pla::build_one_step_graph(g, 0.1);
  CHECK(pla::min_resistance(fg, 2).phi_star == doctest::Approx(15.0));

  // Classic contraction case: a cheap 2-cycle that must be broken.
  const auto cyc = hand_graph(4, {{1, 2, 1}, {2, 1, 1}, {1, 0, 10}, {2, 0, 8}, {3, 1, 2}, {3, 0, 20}});
  const auto m = pla::min_resistance(cyc, 0);
  CHECK(m.phi_star == 8 + 1 + 2);
  CHECK_FALSE(pla::wgraph_violation(m.g_star).has_value());

  const auto line = hand_graph(3, {{1, 0, 1}, {2, 1, 1}});
  try {
    pla::min_resistance(line, 2);
    FAIL("expected InfeasibleError");
  } catch (const pla::InfeasibleError& e) {
    CHECK(e.stranded_state() != 2);
  }
}

TEST_CASE("minimum arborescence equals brute force") {
  oracle::Engine rng(77);
  for (int rep = 0; rep < 150; ++rep) {
    const std::size_t n = oracle::pick(rng, 2, 7);
    // Integer weights provoke ties.
    auto graph = oracle::random_digraph(rng, n, 0.5, 1.0, rep % 2 ? 4.0 : 100.0);
    if (rep % 2) {
      std::vector<OneStepArrow> rounded(graph.arrows());
      for (auto& a : rounded) a.weight = std::floor(a.weight);
      graph = OneStepGraph(n, std::move(rounded));
    }
    for (std::size_t root = 0; root < n; ++root) {
      const auto m = pla::min_resistance(graph, root);
      const auto brute = oracle::brute_min_resistance(graph, root);
      CHECK(std::abs(m.phi_star - brute.value) <= 1e-12 * brute.value);
      CHECK_FALSE(pla::wgraph_violation(m.g_star).has_value());
      CHECK(m.g_star.arrows.size() == n - 1);
    }
  }
}

}  // TEST_SUITE
