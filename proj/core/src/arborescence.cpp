#include <algorithm>
#include <deque>
#include <limits>

#include "pla/errors.hpp"
#include "pla/graphs.hpp"

namespace pla {

namespace {

struct LevelArc {
  std::size_t from;
  std::size_t to;
  double weight;
};

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// One contraction level of Chu-Liu/Edmonds. Returns indices into `arcs`.
// Every node is assumed reachable from root.
std::vector<std::size_t> solve_level(std::size_t nodes,
                                     const std::vector<LevelArc>& arcs,
                                     std::size_t root) {
  std::vector<std::size_t> best_in(nodes, kNone);
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    const auto& a = arcs[k];
    if (a.to == root || a.from == a.to) continue;
    if (best_in[a.to] == kNone || a.weight < arcs[best_in[a.to]].weight) {
      best_in[a.to] = k;
    }
  }
  for (std::size_t v = 0; v < nodes; ++v) {
    if (v != root && best_in[v] == kNone) {
      throw InfeasibleError("node " + std::to_string(v) + " has no entering arc",
                            v);
    }
  }

  // Cycles of the cheapest-entering-arc functional graph.
  std::vector<std::size_t> cycle_id(nodes, kNone);
  std::vector<std::size_t> visit_mark(nodes, kNone);
  std::size_t cycles = 0;
  for (std::size_t start = 0; start < nodes; ++start) {
    std::size_t v = start;
    while (v != root && visit_mark[v] == kNone && cycle_id[v] == kNone) {
      visit_mark[v] = start;
      v = arcs[best_in[v]].from;
    }
    if (v != root && visit_mark[v] == start && cycle_id[v] == kNone) {
      std::size_t u = v;
      do {
        cycle_id[u] = cycles;
        u = arcs[best_in[u]].from;
      } while (u != v);
      ++cycles;
    }
  }

  std::vector<std::size_t> chosen;
  if (cycles == 0) {
    for (std::size_t v = 0; v < nodes; ++v) {
      if (v != root) chosen.push_back(best_in[v]);
    }
    return chosen;
  }

  // Contract: cycle c becomes node c, other nodes follow in order.
  std::vector<std::size_t> comp(nodes);
  std::size_t next = cycles;
  for (std::size_t v = 0; v < nodes; ++v) {
    comp[v] = cycle_id[v] != kNone ? cycle_id[v] : next++;
  }
  std::vector<LevelArc> contracted;
  std::vector<std::size_t> origin;
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    const auto& a = arcs[k];
    const std::size_t cu = comp[a.from];
    const std::size_t cv = comp[a.to];
    if (cu == cv || a.to == root) continue;
    double w = a.weight;
    if (cycle_id[a.to] != kNone) w -= arcs[best_in[a.to]].weight;
    contracted.push_back({cu, cv, w});
    origin.push_back(k);
  }

  const auto sub = solve_level(next, contracted, comp[root]);

  std::vector<std::size_t> entered(cycles, kNone);
  for (std::size_t idx : sub) {
    const std::size_t k = origin[idx];
    chosen.push_back(k);
    if (cycle_id[arcs[k].to] != kNone) entered[cycle_id[arcs[k].to]] = arcs[k].to;
  }
  for (std::size_t v = 0; v < nodes; ++v) {
    if (cycle_id[v] != kNone && entered[cycle_id[v]] != v) {
      chosen.push_back(best_in[v]);
    }
  }
  return chosen;
}

}  // namespace

std::vector<std::size_t> min_out_arborescence(std::size_t nodes,
                                              std::span<const WeightedArc> arcs,
                                              std::size_t root) {
  if (root >= nodes) throw std::invalid_argument("root out of range");
  std::vector<std::vector<std::size_t>> adj(nodes);
  for (const auto& a : arcs) {
    if (a.from >= nodes || a.to >= nodes) {
      throw std::invalid_argument("arc endpoint out of range");
    }
    adj[a.from].push_back(a.to);
  }
  std::vector<bool> seen(nodes, false);
  std::deque<std::size_t> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  for (std::size_t v = 0; v < nodes; ++v) {
    if (!seen[v]) {
      throw InfeasibleError("state " + std::to_string(v) +
                                " is stranded: no path connects it with root " +
                                std::to_string(root),
                            v);
    }
  }

  std::vector<LevelArc> level;
  level.reserve(arcs.size());
  for (const auto& a : arcs) level.push_back({a.from, a.to, a.weight});
  auto chosen = solve_level(nodes, level, root);
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<std::size_t> min_in_arborescence(std::size_t nodes,
                                             std::span<const WeightedArc> arcs,
                                             std::size_t root) {
  std::vector<WeightedArc> reversed;
  reversed.reserve(arcs.size());
  for (const auto& a : arcs) reversed.push_back({a.to, a.from, a.weight});
  return min_out_arborescence(nodes, reversed, root);
}

}  // namespace pla
