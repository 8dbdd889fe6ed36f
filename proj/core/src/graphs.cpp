#include "pla/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "pla/errors.hpp"
#include "pla/tremble.hpp"

namespace pla {

namespace {

std::uint64_t arrow_key(std::size_t from, std::size_t to, std::size_t nodes) {
  return static_cast<std::uint64_t>(from) * nodes + to;
}

}  // namespace

OneStepGraph::OneStepGraph(std::size_t nodes, std::vector<OneStepArrow> arrows,
                           std::vector<double> gamma)
    : nodes_(nodes), arrows_(std::move(arrows)), out_(nodes),
      gamma_(std::move(gamma)) {
  index_.reserve(arrows_.size());
  for (std::size_t k = 0; k < arrows_.size(); ++k) {
    const auto& a = arrows_[k];
    if (a.from >= nodes_ || a.to >= nodes_) {
      throw std::invalid_argument("arrow endpoint out of range");
    }
    if (a.from == a.to) throw std::invalid_argument("self-loop arrow");
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw std::invalid_argument("arrow weights must be finite and positive");
    }
    if (!index_.emplace(arrow_key(a.from, a.to, nodes_), k).second) {
      throw std::invalid_argument("duplicate arrow " + std::to_string(a.from) +
                                  "->" + std::to_string(a.to));
    }
    out_[a.from].push_back(k);
  }
}

const OneStepArrow* OneStepGraph::find(std::size_t from, std::size_t to) const {
  auto it = index_.find(arrow_key(from, to, nodes_));
  return it == index_.end() ? nullptr : &arrows_[it->second];
}

OneStepGraph build_one_step_graph(const Game& game, double epsilon,
                                  double annotation_delta) {
  if (!(epsilon > 0.0) || !(epsilon * game.max_utility() < 1.0)) {
    throw std::invalid_argument(
        "step-size precondition violated: need 0 < epsilon * u < 1 for every "
        "utility");
  }
  const auto& space = game.space();
  const std::size_t n = game.players();
  const double eta_value = eta(annotation_delta);

  std::vector<OneStepArrow> arrows;
  std::size_t per_node = 0;
  for (std::size_t j = 0; j < n; ++j) per_node += space.actions(j) - 1;
  arrows.reserve(space.size() * per_node);

  for (std::size_t p = 0; p < space.size(); ++p) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t current = space.action_of(p, j);
      for (std::size_t a = 0; a < space.actions(j); ++a) {
        if (a == current) continue;
        const std::size_t q = space.with_action(p, j, a);
        const double step = epsilon * game.utility(q, j);
        arrows.push_back({p, q, j, 1.0 / step, std::exp(eta_value / step)});
      }
    }
  }

  std::vector<double> gamma(n);
  for (std::size_t j = 0; j < n; ++j) gamma[j] = tremble_gamma(n, space.actions(j));

  OneStepGraph graph(space.size(), std::move(arrows), std::move(gamma));
  graph.epsilon = epsilon;
  graph.annotation_delta = annotation_delta;
  graph.eta_value = eta_value;
  return graph;
}

WGraph WGraph::rooted(std::size_t nodes, std::size_t root) {
  WGraph g;
  g.nodes = nodes;
  g.target.assign(nodes, false);
  g.target.at(root) = true;
  return g;
}

std::optional<std::string> wgraph_violation(const WGraph& g) {
  if (g.target.size() != g.nodes) return "target mask has the wrong size";
  std::vector<std::size_t> next(g.nodes, g.nodes);
  for (const auto& a : g.arrows) {
    if (a.from >= g.nodes || a.to >= g.nodes) return "arrow out of range";
    if (a.from == a.to) return "self-loop at " + std::to_string(a.from);
    if (g.target[a.from]) {
      return "target node " + std::to_string(a.from) + " has an outgoing arrow";
    }
    if (next[a.from] != g.nodes) {
      return "node " + std::to_string(a.from) + " has two outgoing arrows";
    }
    next[a.from] = a.to;
  }
  for (std::size_t k = 0; k < g.nodes; ++k) {
    if (!g.target[k] && next[k] == g.nodes) {
      return "node " + std::to_string(k) + " has no outgoing arrow";
    }
  }
  // Out-degree is one outside W, so "reaches W" and "acyclic" coincide; walk
  // at most `nodes` arrows from each node.
  for (std::size_t k = 0; k < g.nodes; ++k) {
    std::size_t cur = k;
    std::size_t hops = 0;
    while (!g.target[cur]) {
      cur = next[cur];
      if (++hops > g.nodes) {
        return "cycle through node " + std::to_string(k);
      }
    }
  }
  return std::nullopt;
}

void for_each_w_graph(
    std::size_t nodes, const std::vector<std::vector<std::size_t>>& successors,
    const std::vector<bool>& target,
    const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> free_nodes;
  for (std::size_t k = 0; k < nodes; ++k) {
    if (!target[k]) free_nodes.push_back(k);
  }
  const std::size_t unset = nodes;
  std::vector<std::size_t> choice(nodes, unset);

  // A new arrow can only close a cycle through its own source.
  auto closes_cycle = [&](std::size_t source) {
    std::size_t cur = choice[source];
    while (!target[cur] && choice[cur] != unset) {
      if (cur == source) return true;
      cur = choice[cur];
    }
    return cur == source;
  };

  std::function<void(std::size_t)> assign = [&](std::size_t depth) {
    if (depth == free_nodes.size()) {
      visit(choice);
      return;
    }
    const std::size_t k = free_nodes[depth];
    for (std::size_t to : successors[k]) {
      if (to == k) continue;
      choice[k] = to;
      if (!closes_cycle(k)) assign(depth + 1);
    }
    choice[k] = unset;
  };
  assign(0);
}

std::vector<WGraph> enumerate_s_graphs(const OneStepGraph& graph,
                                       std::size_t root, std::size_t guard) {
  if (graph.nodes() > guard) {
    throw ResourceLimitError(
        "s-graph enumeration (use min_resistance for larger graphs)",
        graph.nodes(), guard);
  }
  if (root >= graph.nodes()) throw std::invalid_argument("root out of range");
  std::vector<std::vector<std::size_t>> successors(graph.nodes());
  for (const auto& a : graph.arrows()) successors[a.from].push_back(a.to);

  WGraph shell = WGraph::rooted(graph.nodes(), root);
  std::vector<WGraph> out;
  for_each_w_graph(graph.nodes(), successors, shell.target,
                   [&](const std::vector<std::size_t>& choice) {
                     WGraph g = shell;
                     for (std::size_t k = 0; k < graph.nodes(); ++k) {
                       if (!shell.target[k]) g.arrows.push_back({k, choice[k]});
                     }
                     out.push_back(std::move(g));
                   });
  return out;
}

double graph_resistance(const WGraph& g, const OneStepGraph& graph) {
  double total = 0.0;
  for (const auto& a : g.arrows) {
    const auto* arrow = graph.find(a.from, a.to);
    if (arrow == nullptr) {
      throw std::invalid_argument("arrow " + std::to_string(a.from) + "->" +
                                  std::to_string(a.to) +
                                  " is not a one-step transition");
    }
    total += arrow->weight;
  }
  return total;
}

double gamma_bar(const WGraph& g, const OneStepGraph& graph) {
  if (graph.gamma().empty()) {
    throw std::invalid_argument("graph carries no tremble probabilities");
  }
  double product = 1.0;
  for (const auto& a : g.arrows) {
    const auto* arrow = graph.find(a.from, a.to);
    if (arrow == nullptr) {
      throw std::invalid_argument("arrow is not a one-step transition");
    }
    product *= graph.gamma()[arrow->deviator];
  }
  return product;
}

MinResistance min_resistance(const OneStepGraph& graph, std::size_t root) {
  if (root >= graph.nodes()) throw std::invalid_argument("root out of range");
  std::vector<WeightedArc> arcs;
  arcs.reserve(graph.arrows().size());
  for (const auto& a : graph.arrows()) arcs.push_back({a.from, a.to, a.weight});

  const auto chosen = min_in_arborescence(graph.nodes(), arcs, root);
  MinResistance result{0.0, WGraph::rooted(graph.nodes(), root)};
  for (std::size_t idx : chosen) {
    result.g_star.arrows.push_back({arcs[idx].from, arcs[idx].to});
  }
  std::sort(result.g_star.arrows.begin(), result.g_star.arrows.end());
  result.phi_star = graph_resistance(result.g_star, graph);
  return result;
}

}  // namespace pla
