#include "pla/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pla {

bool ResistanceReport::contains(std::size_t state) const {
  return std::binary_search(stable_set.begin(), stable_set.end(), state);
}

ResistanceReport stochastically_stable_set(const OneStepGraph& graph,
                                           double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be nonnegative");
  const std::size_t n = graph.nodes();
  if (n == 0) throw std::invalid_argument("graph has no states");

  ResistanceReport report;
  report.epsilon = graph.epsilon;
  report.rho = rho;
  report.phi_star.reserve(n);
  report.g_star.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    auto m = min_resistance(graph, s);
    report.phi_star.push_back(m.phi_star);
    if (!graph.gamma().empty()) {
      report.gamma_bar.push_back(gamma_bar(m.g_star, graph));
    }
    report.g_star.push_back(std::move(m.g_star));
  }

  const double best =
      *std::min_element(report.phi_star.begin(), report.phi_star.end());
  const double cutoff = best + rho * std::abs(best);
  double inside_max = -std::numeric_limits<double>::infinity();
  double outside_min = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s) {
    if (report.phi_star[s] <= cutoff) {
      report.stable_set.push_back(s);
      inside_max = std::max(inside_max, report.phi_star[s]);
    } else {
      outside_min = std::min(outside_min, report.phi_star[s]);
    }
  }
  if (report.stable_set.size() < n) {
    report.gap = outside_min - inside_max;
    report.strict_gap = *report.gap > 0.0;
  }
  return report;
}

ResistanceReport stochastically_stable_set(const Game& game, double epsilon,
                                           double rho) {
  return stochastically_stable_set(build_one_step_graph(game, epsilon), rho);
}

WGraph best_br_graph(const Game& game) {
  const auto check = is_coordination_game(game);
  if (!check.holds) {
    throw CoordinationViolation("game is not a coordination game",
                                check.witness, std::nullopt);
  }
  const auto& space = game.space();
  WGraph g;
  g.nodes = space.size();
  g.target.assign(g.nodes, false);
  for (std::size_t s : nash_profile_indices(game)) g.target[s] = true;

  for (std::size_t s = 0; s < g.nodes; ++s) {
    if (g.target[s]) continue;
    const auto move = improving_bbr(game, space.decode(s));
    // A non-Nash state always has a player who is not best-responding.
    g.arrows.push_back({s, space.encode(move->destination)});
  }

  if (auto violation = wgraph_violation(g)) {
    // Locate the first state whose arrow chain never reaches a Nash state.
    std::vector<std::size_t> next(g.nodes, g.nodes);
    for (const auto& a : g.arrows) next[a.from] = a.to;
    std::optional<std::size_t> bad;
    for (std::size_t s = 0; s < g.nodes && !bad; ++s) {
      std::size_t cur = s;
      for (std::size_t hops = 0; !g.target[cur]; ++hops) {
        if (hops > g.nodes) {
          bad = s;
          break;
        }
        cur = next[cur];
      }
    }
    throw CoordinationViolation(
        "best-BR arrows do not form a W-graph over the Nash states: " +
            *violation,
        std::nullopt, bad);
  }
  return g;
}

}  // namespace pla
