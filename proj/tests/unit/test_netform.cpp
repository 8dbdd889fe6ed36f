#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "pla/errors.hpp"
#include "pla/netform.hpp"

using pla::DirectedGraph;
using pla::Topology;

namespace {

DirectedGraph graph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> links) {
  std::sort(links.begin(), links.end());
  return DirectedGraph{n, std::move(links)};
}

DirectedGraph wheel(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> links;
  for (std::size_t v = 0; v < n; ++v) links.emplace_back(v, (v + 1) % n);
  return graph(n, links);
}

}  // namespace

TEST_SUITE("netform") {

TEST_CASE("topologies") {
  const auto ring = Topology::ring(6);
  CHECK(ring.neighbors[0] == std::vector<std::size_t>{1, 5});
  CHECK(ring.neighbors[3] == std::vector<std::size_t>{2, 4});
  CHECK(Topology::ring(2).neighbors[0] == std::vector<std::size_t>{1});
  CHECK(Topology::complete(3).neighbors[1] == std::vector<std::size_t>{0, 2});
  CHECK_THROWS_AS(Topology::make(2, {{0}, {0}}), std::invalid_argument);
  CHECK_THROWS_AS(Topology::make(2, {{2}, {0}}), std::invalid_argument);
  CHECK_THROWS_AS(Topology::make(2, {{1, 1}, {0}}), std::invalid_argument);
  CHECK_THROWS_AS(Topology::make(2, {{1}}), std::invalid_argument);
}

TEST_CASE("induced graphs") {
  const auto topo = Topology::complete(3);
  CHECK(pla::induced_graph(topo, {0, 0, 0}).links.empty());
  // Node i links with its predecessor: neighbors of 0 are {1,2}, so the
  // predecessor 2 is bit 1; of 1 it is 0 (bit 0); of 2 it is 1 (bit 1).
  const auto cycle = pla::induced_graph(topo, {2, 1, 2});
  CHECK(cycle.links == graph(3, {{2, 0}, {0, 1}, {1, 2}}).links);
  CHECK(cycle.links.size() == 3);
  const auto dense = pla::induced_graph(topo, {3, 3, 1});
  CHECK(dense.links.size() == 2 + 2 + 1);
  CHECK_THROWS_AS(pla::induced_graph(topo, {4, 0, 0}), std::invalid_argument);
}

TEST_CASE("reachability and utility") {
  const auto topo = Topology::complete(3);
  const auto cycle = pla::induced_graph(topo, {2, 1, 2});
  CHECK(pla::reach_indicator(cycle, 2, 0));
  CHECK(pla::reach_indicator(cycle, 0, 2));
  const auto empty = pla::induced_graph(topo, {0, 0, 0});
  CHECK_FALSE(pla::reach_indicator(empty, 0, 1));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(pla::nf_utility(topo, {0, 0, 0}, i, 0.5, 0.0) == 0.0);
    CHECK(pla::nf_utility(topo, {2, 1, 2}, i, 0.5, 0.0) == 1.5);
    CHECK(pla::nf_utility(topo, {2, 1, 2}, i, 0.5, 1.0) == 2.5);
  }
  CHECK_THROWS_AS(pla::nf_utility(topo, {0, 0, 0}, 0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pla::nf_utility(topo, {0, 0, 0}, 0, 0.5, -1.0), std::invalid_argument);

  // Lower bounds: utility >= offset - kappa |alpha_i|, and >= offset when
  // the node owns no link.
  const auto ring = Topology::ring(5);
  const pla::ProfileSpace space(std::vector<std::size_t>(5, 4));
  for (std::size_t p = 0; p < space.size(); ++p) {
    const auto prof = space.decode(p);
    for (std::size_t i = 0; i < 5; ++i) {
      const double u = pla::nf_utility(ring, prof, i, 0.5, 0.0);
      const double links = static_cast<double>((prof[i] & 1U) + ((prof[i] >> 1) & 1U));
      CHECK(u >= -0.5 * links);
      if (prof[i] == 0) CHECK(u >= 0.0);
    }
  }
}

TEST_CASE("game construction") {
  const auto g3 = pla::make_netform_game(Topology::complete(3), 0.5, 1.0);
  CHECK(g3.profile_count() == 64);
  CHECK(g3.action_labels(0)[3] == "{1 2}");
  const auto g6 = pla::make_netform_game(Topology::ring(6), 0.5, 1.0);
  CHECK(g6.profile_count() == 4096);
  CHECK_THROWS_AS(pla::make_netform_game(Topology::complete(3), 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(pla::make_netform_game(Topology::complete(9), 0.5, 1.0), pla::ResourceLimitError);

  // Offsets shift each player's utility uniformly, so best responses agree.
  const auto topo = Topology::complete(3);
  const pla::ProfileSpace space({4, 4, 4});
  for (std::size_t p = 0; p < space.size(); ++p) {
    for (std::size_t i = 0; i < 3; ++i) {
      auto argmax = [&](double offset) {
        std::vector<std::size_t> best;
        double top = -INFINITY;
        for (std::size_t a = 0; a < 4; ++a) {
          const double u = pla::nf_utility(topo, space.decode(space.with_action(p, i, a)), i, 0.5, offset);
          if (u > top) {
            top = u;
            best = {a};
          } else if (u == top) {
            best.push_back(a);
          }
        }
        return best;
      };
      CHECK(argmax(0.0) == argmax(1.0));
    }
  }
}

TEST_CASE("critical connectivity") {
  CHECK(pla::critically_connected(wheel(6)));
  CHECK_FALSE(pla::critically_connected(graph(3, {})));
  CHECK(pla::critically_connected(graph(1, {})));
  // 4-cycle plus chord 0 -> 2: the chord's endpoints also join via 0->1->2.
  CHECK_FALSE(pla::critically_connected(graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}})));
  CHECK_THROWS_AS(pla::critically_connected(wheel(13)), pla::ResourceLimitError);

  oracle::Engine rng(9);
  for (int rep = 0; rep < 400; ++rep) {
    const std::size_t n = oracle::pick(rng, 2, 6);
    std::vector<std::pair<std::size_t, std::size_t>> links;
    const double p = oracle::uniform(rng, 0.1, 0.6);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (a != b && oracle::uniform(rng, 0, 1) < p) links.emplace_back(a, b);
    if (rep % 4 == 0) {
      // Seed many instances with a spanning cycle so positives occur.
      for (std::size_t v = 0; v < n; ++v) links.emplace_back(v, (v + 1) % n);
      std::sort(links.begin(), links.end());
      links.erase(std::unique(links.begin(), links.end()), links.end());
    }
    const auto g = graph(n, links);
    CHECK(pla::critically_connected(g) == oracle::critically_connected(g));
  }
}

TEST_CASE("wheel detection") {
  CHECK(pla::is_wheel(wheel(6)));
  CHECK_FALSE(pla::is_wheel(graph(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}})));
  CHECK_FALSE(pla::is_wheel(graph(3, {{0, 1}, {1, 2}})));
}

TEST_CASE("inverse total distance") {
  const auto ring = Topology::ring(6);
  for (std::size_t v = 0; v < 6; ++v) {
    CHECK(pla::inverse_total_distance(wheel(6), ring, v) == doctest::Approx(1.0 / 6.0));
  }
  CHECK(pla::mean_inverse_total_distance(wheel(6), ring) == doctest::Approx(1.0 / 6.0));
  CHECK(pla::inverse_total_distance(graph(6, {{0, 1}}), ring, 0) == 0.0);
  std::vector<std::pair<std::size_t, std::size_t>> both;
  for (std::size_t v = 0; v < 6; ++v) {
    both.emplace_back(v, (v + 1) % 6);
    both.emplace_back((v + 1) % 6, v);
  }
  for (std::size_t v = 0; v < 6; ++v) {
    CHECK(pla::inverse_total_distance(graph(6, both), ring, v) == doctest::Approx(0.5));
  }

  // Transposed direction against Floyd-Warshall distances.
  oracle::Engine rng(14);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::pair<std::size_t, std::size_t>> links;
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = 0; b < 6; ++b)
        if (a != b && oracle::uniform(rng, 0, 1) < 0.35) links.emplace_back(a, b);
    const auto g = graph(6, links);
    const auto d = oracle::distances(g);
    for (std::size_t v = 0; v < 6; ++v) {
      double out = 0, in = 0;
      for (auto m : ring.neighbors[v]) {
        out += d[v][m];
        in += d[m][v];
      }
      CHECK(pla::inverse_total_distance(g, ring, v) == doctest::Approx(std::isinf(out) ? 0.0 : 1.0 / out));
      CHECK(pla::inverse_total_distance(g, ring, v, pla::DistanceDirection::to_node) ==
            doctest::Approx(std::isinf(in) ? 0.0 : 1.0 / in));
    }
  }
}

TEST_CASE("Nash networks are the critically connected ones") {
  const auto topo = Topology::complete(3);
  const auto g = pla::make_netform_game(topo, 0.5, 1.0);
  for (std::size_t s = 0; s < g.profile_count(); ++s) {
    CHECK(pla::is_nash(g, s) ==
          pla::critically_connected(pla::induced_graph(topo, g.space().decode(s))));
  }
  CHECK(pla::is_coordination_game(g).holds);
  CHECK(pla::is_coordination_game(pla::make_netform_game(Topology::ring(4), 0.5, 1.0)).holds);
}

TEST_CASE("six-ring Nash networks and the distance metric") {
  const auto ring = Topology::ring(6);
  const auto g = pla::make_netform_game(ring, 0.5, 1.0);
  const auto metrics = pla::metric_table(ring, g);
  const auto ne = pla::nash_profile_indices(g);
  std::size_t wheels = 0;
  double wheel_metric = 0.0, others_min = INFINITY;
  for (std::size_t s : ne) {
    const auto net = pla::induced_graph(ring, g.space().decode(s));
    CHECK(pla::critically_connected(net));
    bool all_sixth = true;
    for (std::size_t v = 0; v < 6; ++v) {
      all_sixth &= std::abs(pla::inverse_total_distance(net, ring, v) - 1.0 / 6.0) < 1e-15;
    }
    CHECK(all_sixth == pla::is_wheel(net));
    if (pla::is_wheel(net)) {
      ++wheels;
      wheel_metric = metrics[s];
    } else {
      others_min = std::min(others_min, metrics[s]);
    }
  }
  // Two orientations of the wheel plus the six bidirectional paths.
  CHECK(ne.size() == 8);
  CHECK(wheels == 2);
  CHECK(wheel_metric == doctest::Approx(1.0 / 6.0));
  CHECK(wheel_metric < others_min);
}

TEST_CASE("experiment runner") {
  pla::NetformConfig config;
  config.topology = Topology::ring(4);
  config.steps = 20000;
  config.epsilon = 0.02;
  config.lambda = 0.01;
  const auto game = pla::make_netform_game(config.topology, config.kappa, config.offset);
  const auto metrics = pla::metric_table(config.topology, game);
  std::vector<double> series;
  const auto a = pla::run_netform(game, metrics, config, 1000,
                                  [&](std::uint64_t, double v) { series.push_back(v); });
  CHECK(series.size() == 20);
  for (double v : series) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(series.back() == doctest::Approx(a.running_average).epsilon(0.01));
  const auto b = pla::run_netform(game, metrics, config);
  CHECK(a.running_average == b.running_average);
  CHECK(a.occupancy.counts == b.occupancy.counts);
  CHECK(a.final_profile == b.final_profile);
  CHECK(a.occupancy.steps == 20000);
}

}  // TEST_SUITE
