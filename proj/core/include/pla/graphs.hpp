#ifndef PLA_GRAPHS_HPP
#define PLA_GRAPHS_HPP

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pla/game.hpp"

namespace pla {

struct Arrow {
  std::size_t from;
  std::size_t to;

  auto operator<=>(const Arrow&) const = default;
};

/// Single-player single-action deviation between pure strategy states.
struct OneStepArrow {
  std::size_t from;
  std::size_t to;
  std::size_t deviator;
  double weight;      ///< resistance 1 / (epsilon * u_deviator(to))
  double annotation;  ///< exp(eta(delta) / (epsilon * u_deviator(to)))
};

/// Weighted digraph of one-step transitions over pure strategy states.
class OneStepGraph {
 public:
  OneStepGraph() = default;
  /// Throws std::invalid_argument on self-loops, duplicate arrows,
  /// out-of-range endpoints or non-positive weights.
  OneStepGraph(std::size_t nodes, std::vector<OneStepArrow> arrows,
               std::vector<double> gamma = {});

  std::size_t nodes() const noexcept { return nodes_; }
  const std::vector<OneStepArrow>& arrows() const noexcept { return arrows_; }
  /// Arrow ids leaving `node`.
  const std::vector<std::size_t>& outgoing(std::size_t node) const {
    return out_.at(node);
  }
  const OneStepArrow* find(std::size_t from, std::size_t to) const;

  /// Per-player probability that the single-tremble kernel selects a given
  /// action of that player. Empty for hand-built graphs.
  const std::vector<double>& gamma() const noexcept { return gamma_; }

  double epsilon = 0.0;
  double annotation_delta = 0.0;
  double eta_value = 0.0;

 private:
  std::size_t nodes_ = 0;
  std::vector<OneStepArrow> arrows_;
  std::vector<std::vector<std::size_t>> out_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::vector<double> gamma_;
};

inline constexpr double kDefaultAnnotationDelta = 0.01;

/// All arrows between profiles differing in exactly one player's action.
/// Throws std::invalid_argument unless 0 < epsilon * u < 1 for every entry.
OneStepGraph build_one_step_graph(const Game& game, double epsilon,
                                  double annotation_delta =
                                      kDefaultAnnotationDelta);

/// Arrow assignment in which every node outside the target set has one
/// outgoing arrow and a path into the target set.
struct WGraph {
  std::size_t nodes = 0;
  std::vector<bool> target;
  std::vector<Arrow> arrows;

  /// W-graph with target {root} and no arrows yet.
  static WGraph rooted(std::size_t nodes, std::size_t root);
};

/// Description of the first violated W-graph condition, or nullopt.
std::optional<std::string> wgraph_violation(const WGraph& g);

inline constexpr std::size_t kDefaultEnumerationGuard = 9;

/// Visits every W-graph whose arrows come from `successors` (candidate
/// targets per node). The visitor gets choice[k] = arrow target of k for
/// nodes outside the target set; entries for target nodes are unspecified.
void for_each_w_graph(
    std::size_t nodes, const std::vector<std::vector<std::size_t>>& successors,
    const std::vector<bool>& target,
    const std::function<void(const std::vector<std::size_t>&)>& visit);

/// Every {root}-graph made of one-step arrows. Throws ResourceLimitError when
/// the graph has more than `guard` nodes; use min_resistance instead.
std::vector<WGraph> enumerate_s_graphs(const OneStepGraph& graph,
                                       std::size_t root,
                                       std::size_t guard =
                                           kDefaultEnumerationGuard);

/// Sum of arrow resistances. Throws std::invalid_argument if an arrow is not
/// in the one-step graph.
double graph_resistance(const WGraph& g, const OneStepGraph& graph);

/// Product of single-tremble selection probabilities along the arrows.
double gamma_bar(const WGraph& g, const OneStepGraph& graph);

struct WeightedArc {
  std::size_t from;
  std::size_t to;
  double weight;
};

/// Chu-Liu/Edmonds minimum spanning out-arborescence: every node other than
/// root gets exactly one incoming arc. Returns chosen indices into `arcs`,
/// ties resolved toward lower indices. Throws InfeasibleError naming a node
/// unreachable from root.
std::vector<std::size_t> min_out_arborescence(std::size_t nodes,
                                              std::span<const WeightedArc> arcs,
                                              std::size_t root);

/// Minimum spanning in-arborescence (every node has a path to root), via the
/// out-arborescence of the reversed graph.
std::vector<std::size_t> min_in_arborescence(std::size_t nodes,
                                             std::span<const WeightedArc> arcs,
                                             std::size_t root);

struct MinResistance {
  double phi_star;
  WGraph g_star;
};

/// Minimum-resistance {root}-graph without enumeration. Throws
/// InfeasibleError if some state cannot reach root.
MinResistance min_resistance(const OneStepGraph& graph, std::size_t root);

}  // namespace pla

#endif  // PLA_GRAPHS_HPP
