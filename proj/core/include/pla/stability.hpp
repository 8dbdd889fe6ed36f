#ifndef PLA_STABILITY_HPP
#define PLA_STABILITY_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pla/game.hpp"
#include "pla/graphs.hpp"

namespace pla {

inline constexpr double kDefaultStabilityRho = 1e-9;

struct ResistanceReport {
  double epsilon = 0.0;
  double rho = kDefaultStabilityRho;
  std::vector<double> phi_star;  ///< per pure strategy state
  std::vector<WGraph> g_star;    ///< minimizing {s}-graph per state
  std::vector<double> gamma_bar; ///< recorded, not used for ranking
  std::vector<std::size_t> stable_set;
  /// min of phi* over the complement minus max over the stable set; empty
  /// when the stable set is every state.
  std::optional<double> gap;
  /// Every state outside the set has strictly larger phi* than every state
  /// inside it (vacuously true for a full set).
  bool strict_gap = true;

  bool contains(std::size_t state) const;
};

/// phi*(s) for every state via min_resistance; the stable set is the level
/// set {s : phi*(s) <= (1 + rho) min phi*}.
ResistanceReport stochastically_stable_set(const OneStepGraph& graph,
                                           double rho = kDefaultStabilityRho);
ResistanceReport stochastically_stable_set(const Game& game, double epsilon,
                                           double rho = kDefaultStabilityRho);

/// Raised when best_br_graph cannot build a valid W-graph: the game is not a
/// coordination game, or the best-BR arrows cycle or strand a state.
class CoordinationViolation : public std::invalid_argument {
 public:
  CoordinationViolation(const std::string& what,
                        std::optional<CoordinationWitness> witness,
                        std::optional<std::size_t> state)
      : std::invalid_argument(what), witness_(std::move(witness)),
        state_(state) {}

  const std::optional<CoordinationWitness>& witness() const noexcept {
    return witness_;
  }
  /// Profile index where the arrow structure broke, if applicable.
  std::optional<std::size_t> state() const noexcept { return state_; }

 private:
  std::optional<CoordinationWitness> witness_;
  std::optional<std::size_t> state_;
};

/// W-graph with W = the Nash states and one best-BR arrow out of every other
/// state. Only players not already best-responding are candidates, so every
/// arrow leaves its source. The result is validated before it is returned.
WGraph best_br_graph(const Game& game);

}  // namespace pla

#endif  // PLA_STABILITY_HPP
