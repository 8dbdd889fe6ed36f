#include "pla/netform.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

#include "pla/errors.hpp"
#include "pla/rng.hpp"

namespace pla {

Topology Topology::make(std::size_t n,
                        std::vector<std::vector<std::size_t>> neighbors) {
  if (n == 0) throw std::invalid_argument("topology needs at least one node");
  if (neighbors.size() != n) {
    throw std::invalid_argument("topology needs one neighbor list per node");
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& list = neighbors[i];
    std::sort(list.begin(), list.end());
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (list[k] >= n) {
        throw std::invalid_argument("neighbor " + std::to_string(list[k]) +
                                    " of node " + std::to_string(i) +
                                    " is out of range");
      }
      if (list[k] == i) {
        throw std::invalid_argument("node " + std::to_string(i) +
                                    " lists itself as a neighbor");
      }
      if (k > 0 && list[k] == list[k - 1]) {
        throw std::invalid_argument("node " + std::to_string(i) +
                                    " lists neighbor " +
                                    std::to_string(list[k]) + " twice");
      }
    }
  }
  return Topology{n, std::move(neighbors)};
}

Topology Topology::ring(std::size_t n) {
  if (n < 2) throw std::invalid_argument("a ring needs at least two nodes");
  std::vector<std::vector<std::size_t>> nb(n);
  for (std::size_t i = 0; i < n; ++i) {
    nb[i] = {(i + n - 1) % n, (i + 1) % n};
    if (nb[i][0] == nb[i][1]) nb[i].pop_back();
  }
  return make(n, std::move(nb));
}

Topology Topology::complete(std::size_t n) {
  std::vector<std::vector<std::size_t>> nb(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) nb[i].push_back(j);
    }
  }
  return make(n, std::move(nb));
}

std::vector<std::vector<std::size_t>> DirectedGraph::out_adjacency() const {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [from, to] : links) adj[from].push_back(to);
  return adj;
}

DirectedGraph induced_graph(const Topology& topology,
                            const ActionProfile& profile) {
  if (profile.size() != topology.n) {
    throw std::invalid_argument("profile needs one action per node");
  }
  DirectedGraph g;
  g.n = topology.n;
  for (std::size_t i = 0; i < topology.n; ++i) {
    const auto& nb = topology.neighbors[i];
    if (nb.size() < 64 && (profile[i] >> nb.size()) != 0) {
      throw std::invalid_argument("action of node " + std::to_string(i) +
                                  " selects a non-neighbor");
    }
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if ((profile[i] >> k) & 1U) g.links.emplace_back(nb[k], i);
    }
  }
  std::sort(g.links.begin(), g.links.end());
  return g;
}

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> bfs_distances(
    const std::vector<std::vector<std::size_t>>& adj, std::size_t source) {
  std::vector<std::size_t> dist(adj.size(), kUnreached);
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[v]) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<std::vector<std::size_t>> in_adjacency(const DirectedGraph& g) {
  std::vector<std::vector<std::size_t>> adj(g.n);
  for (const auto& [from, to] : g.links) adj[to].push_back(from);
  return adj;
}

}  // namespace

bool reach_indicator(const DirectedGraph& graph, std::size_t j,
                     std::size_t i) {
  if (j >= graph.n || i >= graph.n) {
    throw std::invalid_argument("node out of range");
  }
  return bfs_distances(graph.out_adjacency(), j)[i] != kUnreached;
}

std::vector<std::size_t> reach_counts(const DirectedGraph& graph) {
  const auto in = in_adjacency(graph);
  std::vector<std::size_t> counts(graph.n, 0);
  for (std::size_t i = 0; i < graph.n; ++i) {
    const auto dist = bfs_distances(in, i);
    for (std::size_t j = 0; j < graph.n; ++j) {
      if (j != i && dist[j] != kUnreached) ++counts[i];
    }
  }
  return counts;
}

namespace {

std::size_t popcount(std::size_t x) {
  std::size_t c = 0;
  for (; x != 0; x &= x - 1) ++c;
  return c;
}

void check_netform_params(double kappa, double offset) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw std::invalid_argument("kappa must lie in (0, 1)");
  }
  if (!(offset >= 0.0) || !std::isfinite(offset)) {
    throw std::invalid_argument("offset must be finite and nonnegative");
  }
}

}  // namespace

double nf_utility(const Topology& topology, const ActionProfile& profile,
                  std::size_t player, double kappa, double offset) {
  check_netform_params(kappa, offset);
  if (player >= topology.n) throw std::invalid_argument("player out of range");
  const auto g = induced_graph(topology, profile);
  const auto dist = bfs_distances(in_adjacency(g), player);
  std::size_t reached = 0;
  for (std::size_t j = 0; j < g.n; ++j) {
    if (j != player && dist[j] != kUnreached) ++reached;
  }
  return static_cast<double>(reached) -
         kappa * static_cast<double>(popcount(profile[player])) + offset;
}

Game make_netform_game(const Topology& topology, double kappa, double offset) {
  check_netform_params(kappa, offset);
  std::vector<std::size_t> counts(topology.n);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < topology.n; ++i) {
    const std::size_t deg = topology.neighbors[i].size();
    if (deg >= 24) {
      throw ResourceLimitError("profile count", std::uint64_t{1} << 24,
                               kMaxProfiles);
    }
    counts[i] = std::size_t{1} << deg;
    total *= counts[i];
    if (total > kMaxProfiles) {
      throw ResourceLimitError("profile count", total, kMaxProfiles);
    }
  }
  const ProfileSpace space(counts);
  const std::size_t n = topology.n;
  PayoffTable table{counts, std::vector<double>(space.size() * n)};
  for (std::size_t p = 0; p < space.size(); ++p) {
    const auto profile = space.decode(p);
    const auto reached = reach_counts(induced_graph(topology, profile));
    for (std::size_t i = 0; i < n; ++i) {
      table.values[p * n + i] =
          static_cast<double>(reached[i]) -
          kappa * static_cast<double>(popcount(profile[i])) + offset;
    }
  }

  std::vector<std::vector<std::string>> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& nb = topology.neighbors[i];
    for (std::size_t a = 0; a < counts[i]; ++a) {
      std::string label = "{";
      for (std::size_t k = 0; k < nb.size(); ++k) {
        if ((a >> k) & 1U) {
          if (label.size() > 1) label += ' ';
          label += std::to_string(nb[k]);
        }
      }
      labels[i].push_back(label + "}");
    }
  }
  return Game(std::move(table), std::move(labels));
}

namespace {

// Simple paths from `v` to `target`, stopping once `limit` are found.
std::size_t count_paths(const std::vector<std::vector<std::size_t>>& adj,
                        std::size_t v, std::size_t target,
                        std::vector<bool>& on_path, std::size_t limit) {
  if (v == target) return 1;
  on_path[v] = true;
  std::size_t found = 0;
  for (std::size_t w : adj[v]) {
    if (on_path[w]) continue;
    found += count_paths(adj, w, target, on_path, limit - found);
    if (found >= limit) break;
  }
  on_path[v] = false;
  return found;
}

bool strongly_connected(const DirectedGraph& g) {
  if (g.n == 0) return true;
  const auto out = g.out_adjacency();
  const auto in = in_adjacency(g);
  for (const auto* adj : {&out, &in}) {
    const auto d = bfs_distances(*adj, 0);
    if (std::find(d.begin(), d.end(), kUnreached) != d.end()) return false;
  }
  return true;
}

}  // namespace

bool critically_connected(const DirectedGraph& graph) {
  if (graph.n > kCriticalConnectivityGuard) {
    throw ResourceLimitError("critical connectivity", graph.n,
                             kCriticalConnectivityGuard);
  }
  if (!strongly_connected(graph)) return false;
  const auto adj = graph.out_adjacency();
  std::vector<bool> on_path(graph.n, false);
  for (const auto& [s, i] : graph.links) {
    if (count_paths(adj, s, i, on_path, 2) != 1) return false;
  }
  return true;
}

bool is_wheel(const DirectedGraph& graph) {
  if (graph.n < 2 || graph.links.size() != graph.n) return false;
  std::vector<std::size_t> in(graph.n, 0), out(graph.n, 0);
  for (const auto& [from, to] : graph.links) {
    ++out[from];
    ++in[to];
  }
  for (std::size_t v = 0; v < graph.n; ++v) {
    if (in[v] != 1 || out[v] != 1) return false;
  }
  return strongly_connected(graph);
}

namespace {

double inverse_total_distance(
    const std::vector<std::vector<std::size_t>>& adj, const Topology& topology,
    std::size_t node) {
  const auto& nb = topology.neighbors[node];
  if (nb.empty()) return 0.0;
  const auto dist = bfs_distances(adj, node);
  std::size_t total = 0;
  for (std::size_t m : nb) {
    if (dist[m] == kUnreached) return 0.0;
    total += dist[m];
  }
  return 1.0 / static_cast<double>(total);
}

}  // namespace

double inverse_total_distance(const DirectedGraph& graph,
                              const Topology& topology, std::size_t node,
                              DistanceDirection direction) {
  if (graph.n != topology.n || node >= graph.n) {
    throw std::invalid_argument("node or graph does not match the topology");
  }
  const auto adj = direction == DistanceDirection::from_node
                       ? graph.out_adjacency()
                       : in_adjacency(graph);
  return inverse_total_distance(adj, topology, node);
}

double mean_inverse_total_distance(const DirectedGraph& graph,
                                   const Topology& topology,
                                   DistanceDirection direction) {
  if (graph.n != topology.n) {
    throw std::invalid_argument("graph does not match the topology");
  }
  const auto adj = direction == DistanceDirection::from_node
                       ? graph.out_adjacency()
                       : in_adjacency(graph);
  double sum = 0.0;
  for (std::size_t v = 0; v < graph.n; ++v) {
    sum += inverse_total_distance(adj, topology, v);
  }
  return sum / static_cast<double>(graph.n);
}

std::vector<double> metric_table(const Topology& topology, const Game& game,
                                 DistanceDirection direction) {
  const auto& space = game.space();
  if (space.players() != topology.n) {
    throw std::invalid_argument("game does not match the topology");
  }
  std::vector<double> table(space.size());
  for (std::size_t p = 0; p < space.size(); ++p) {
    table[p] = mean_inverse_total_distance(
        induced_graph(topology, space.decode(p)), topology, direction);
  }
  return table;
}

namespace {

class NetformSink : public TraceSink {
 public:
  NetformSink(const ProfileSpace& space, const std::vector<double>& metrics,
              const std::vector<bool>& nash, double delta,
              std::uint64_t metric_every,
              const std::function<void(std::uint64_t, double)>& on_metric)
      : space_(space), metrics_(metrics), nash_(nash), counter_(space, delta),
        every_(metric_every), on_metric_(on_metric) {}

  void on_step(std::uint64_t t, const LearnerState& state,
               bool snapshot) override {
    const std::size_t p = space_.encode(state.profile);
    sum_ += metrics_[p];
    ++steps_;
    if (nash_[p]) ++nash_steps_;
    counter_.on_step(t, state, snapshot);
    if (every_ != 0 && t % every_ == 0 && on_metric_) {
      on_metric_(t, average());
    }
  }

  double average() const {
    return steps_ == 0 ? 0.0 : sum_ / static_cast<double>(steps_);
  }
  double nash_fraction() const {
    return steps_ == 0 ? 0.0
                       : static_cast<double>(nash_steps_) /
                             static_cast<double>(steps_);
  }
  const OccupancyReport& report() const { return counter_.report(); }

 private:
  const ProfileSpace& space_;
  const std::vector<double>& metrics_;
  const std::vector<bool>& nash_;
  OccupancyCounter counter_;
  std::uint64_t every_;
  const std::function<void(std::uint64_t, double)>& on_metric_;
  double sum_ = 0.0;
  std::uint64_t steps_ = 0;
  std::uint64_t nash_steps_ = 0;
};

}  // namespace

NetformResult run_netform(
    const Game& game, const std::vector<double>& metrics,
    const NetformConfig& config, std::uint64_t metric_every,
    const std::function<void(std::uint64_t, double)>& on_metric) {
  const auto& space = game.space();
  if (metrics.size() != space.size()) {
    throw std::invalid_argument("metric table does not match the game");
  }
  if (config.steps == 0) throw std::invalid_argument("steps must be >= 1");
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  std::vector<bool> nash(space.size(), false);
  for (std::size_t p : nash_profile_indices(game)) nash[p] = true;

  // The initial action profile is drawn from a stream separate from the run.
  Rng init_rng(derive_seed(config.seed, 0x6e6574, 0));
  const LearnerState init = uniform_state(game, init_rng);
  const LearnerConfig lc{config.epsilon, config.lambda, config.seed};

  NetformSink sink(space, metrics, nash, config.delta, metric_every,
                   on_metric);
  const LearnerState final_state = run(game, init, lc, config.steps, 0, sink);

  NetformResult result;
  result.running_average = sink.average();
  result.occupancy = sink.report();
  result.modal_state = result.occupancy.modal_state();
  result.nash_fraction = sink.nash_fraction();
  if (result.modal_state) {
    const auto g = induced_graph(config.topology,
                                 space.decode(*result.modal_state));
    result.modal_critically_connected = critically_connected(g);
    result.modal_is_wheel = is_wheel(g);
  }
  result.final_profile = final_state.profile;
  result.final_graph = induced_graph(config.topology, final_state.profile);
  return result;
}

NetformResult run_netform(const NetformConfig& config) {
  const Game game =
      make_netform_game(config.topology, config.kappa, config.offset);
  const auto metrics = metric_table(config.topology, game, config.direction);
  return run_netform(game, metrics, config);
}

}  // namespace pla
