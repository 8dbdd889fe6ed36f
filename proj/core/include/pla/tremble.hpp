#ifndef PLA_TREMBLE_HPP
#define PLA_TREMBLE_HPP

#include <cstddef>
#include <cstdint>

#include "pla/game.hpp"
#include "pla/rng.hpp"

namespace pla {

/// Probability that at least one of n players trembles: 1 - (1 - lambda)^n.
double phi_tremble(double lambda, std::size_t n);

/// Probability that at least two players tremble given that at least one
/// does. Undefined at lambda = 0 (std::invalid_argument).
double psi_tremble(double lambda, std::size_t n);

/// Probability 1 / (n * action_count) that the single-tremble kernel picks a
/// given player and a given action of that player.
double tremble_gamma(std::size_t n, std::size_t action_count);

inline constexpr double kDefaultEtaTolerance = 1e-7;

/// -sum_{l >= 1} (1 - delta^l) / l^2, truncated at the first L whose tail
/// bound 1/L on sum_{l > L} 1/l^2 falls below `tol`. Lies in [-pi^2/6, 0].
double eta(double delta, double tol = kDefaultEtaTolerance);

/// Minimum steps for a gap of 1 to shrink below delta under constant play:
/// ceil(log(delta) / log(1 - epsilon * u)).
std::uint64_t min_hitting_time(double delta, double epsilon, double u);

struct PathProbability {
  double exact;   ///< prod_{t=1}^{T} (1 - H^t), H = 1 - epsilon * u
  double approx;  ///< exp(eta(delta) / (epsilon * u))
  // Logarithms stay finite where the probabilities underflow.
  double log_exact;
  double log_approx;
};

/// Probability of the shortest path into a delta-neighborhood after a single
/// tremble, exactly and via the small-step approximation.
PathProbability shortest_path_prob(double delta, double epsilon, double u,
                                   double eta_tol = kDefaultEtaTolerance);

struct SingleTremble {
  std::size_t player;
  std::size_t action;
};

/// Draws from the single-tremble kernel: a uniform player, then a uniform
/// action of that player (possibly its current one).
SingleTremble sample_single_tremble(const Game& game, Rng& rng);

}  // namespace pla

#endif  // PLA_TREMBLE_HPP
