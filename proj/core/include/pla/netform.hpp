#ifndef PLA_NETFORM_HPP
#define PLA_NETFORM_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "pla/dynamics.hpp"
#include "pla/game.hpp"

namespace pla {

/// Candidate link partners per node. Neighbor lists are kept sorted.
struct Topology {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> neighbors;

  /// Throws std::invalid_argument on out-of-range or self neighbors,
  /// duplicates, or a size mismatch. Sorts each list.
  static Topology make(std::size_t n,
                       std::vector<std::vector<std::size_t>> neighbors);
  /// Each node's candidates are its two ring neighbors (one when n = 2).
  static Topology ring(std::size_t n);
  /// Every other node is a candidate.
  static Topology complete(std::size_t n);
};

/// Links are (from, to). A link chosen by node i toward j is stored as
/// (j, i): it points at the owner.
struct DirectedGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> links;  ///< sorted

  std::vector<std::vector<std::size_t>> out_adjacency() const;
};

/// Action index of node i is a bitmask over its sorted neighbor list; bit k
/// set means node i links with neighbors[i][k].
DirectedGraph induced_graph(const Topology& topology,
                            const ActionProfile& profile);

/// True iff a directed path leads from j to i (j != i).
bool reach_indicator(const DirectedGraph& graph, std::size_t j, std::size_t i);

/// Number of other nodes that reach each node.
std::vector<std::size_t> reach_counts(const DirectedGraph& graph);

inline constexpr double kDefaultNetformOffset = 1.0;

/// sum_{j != i} reach(j -> i) - kappa * |alpha_i| + offset.
double nf_utility(const Topology& topology, const ActionProfile& profile,
                  std::size_t player, double kappa, double offset);

/// Tabulates nf_utility over all profiles. Throws std::invalid_argument for
/// kappa outside (0, 1), a negative offset, or any nonpositive utility (the
/// message names the first violating profile); ResourceLimitError if the
/// profile count exceeds kMaxProfiles.
Game make_netform_game(const Topology& topology, double kappa,
                       double offset = kDefaultNetformOffset);

inline constexpr std::size_t kCriticalConnectivityGuard = 12;

/// Strongly connected, and every link's endpoints are joined by exactly one
/// simple directed path. Throws ResourceLimitError above 12 nodes.
bool critically_connected(const DirectedGraph& graph);

/// Directed ring through all nodes: n links, every node with in- and
/// out-degree one, strongly connected.
bool is_wheel(const DirectedGraph& graph);

enum class DistanceDirection { from_node, to_node };

/// 1 / sum over the node's topology neighbors m of d(node -> m), or of
/// d(m -> node) for to_node. 0 if some neighbor is unreachable or the node
/// has no neighbors.
double inverse_total_distance(const DirectedGraph& graph,
                              const Topology& topology, std::size_t node,
                              DistanceDirection direction =
                                  DistanceDirection::from_node);

double mean_inverse_total_distance(const DirectedGraph& graph,
                                   const Topology& topology,
                                   DistanceDirection direction =
                                       DistanceDirection::from_node);

/// mean_inverse_total_distance of every profile's induced graph, indexed by
/// profile index of `game`.
std::vector<double> metric_table(const Topology& topology, const Game& game,
                                 DistanceDirection direction =
                                     DistanceDirection::from_node);

struct NetformConfig {
  Topology topology = Topology::ring(6);
  double kappa = 0.5;
  double offset = kDefaultNetformOffset;
  double epsilon = 0.005;
  double lambda = 0.005;
  std::uint64_t steps = 2'000'000;
  std::uint64_t seed = 0;
  double delta = 0.01;  ///< occupancy classification
  DistanceDirection direction = DistanceDirection::from_node;
};

struct NetformResult {
  double running_average = 0.0;  ///< of the mean metric over all steps
  OccupancyReport occupancy;
  std::optional<std::size_t> modal_state;
  bool modal_critically_connected = false;
  bool modal_is_wheel = false;
  double nash_fraction = 0.0;  ///< steps spent at a played Nash profile
  ActionProfile final_profile;
  DirectedGraph final_graph;
};

/// Runs the learning dynamics on the network formation game from uniform
/// strategies. `metrics` is metric_table(config.topology, game, ...).
/// `on_metric(t, running_average)` fires after step t whenever
/// t % metric_every == 0 (never if metric_every is 0).
NetformResult run_netform(
    const Game& game, const std::vector<double>& metrics,
    const NetformConfig& config, std::uint64_t metric_every = 0,
    const std::function<void(std::uint64_t, double)>& on_metric = {});

/// Convenience overload that builds the game from the config.
NetformResult run_netform(const NetformConfig& config);

}  // namespace pla

#endif  // PLA_NETFORM_HPP
