#ifndef PLA_MARKOV_HPP
#define PLA_MARKOV_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pla/game.hpp"
#include "pla/graphs.hpp"

namespace pla {

enum class Provenance { monte_carlo, analytic, given };

std::string to_string(Provenance p);

/// Row-stochastic matrix over pure strategy states (profile indices).
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  /// Throws std::invalid_argument on negative entries or rows whose sum is
  /// off by more than `row_tol`.
  TransitionMatrix(std::size_t size, std::vector<double> row_major,
                   Provenance provenance = Provenance::given,
                   double row_tol = 1e-9);

  std::size_t size() const noexcept { return size_; }
  double operator()(std::size_t from, std::size_t to) const noexcept {
    return p_[from * size_ + to];
  }
  const std::vector<double>& data() const noexcept { return p_; }
  Provenance provenance() const noexcept { return provenance_; }

  // Monte Carlo bookkeeping; empty for other provenances.
  std::vector<std::uint64_t> trials;  ///< per source state
  std::vector<std::uint64_t> spill;   ///< timeouts per source state
  std::vector<std::string> warnings;
  std::vector<std::string> labels;    ///< per state, comma-joined profiles

 private:
  std::size_t size_ = 0;
  std::vector<double> p_;
  Provenance provenance_ = Provenance::given;
};

/// Every state reaches every other through positive entries.
bool is_irreducible(const TransitionMatrix& m);

enum class StationaryMethod { wgraph, solve };

struct StationaryDistribution {
  std::vector<double> pi;
  StationaryMethod method;
};

/// Product of matrix entries along the graph's arrows (1 for no arrows).
double graph_weight(const WGraph& g, const TransitionMatrix& m);
/// Sum of log entries along the arrows; -inf if an entry is zero.
double graph_log_weight(const WGraph& g, const TransitionMatrix& m);

/// pi_s = R_s / sum R, R_s summing graph_weight over all {s}-graphs of the
/// matrix's support digraph. Throws std::invalid_argument on a reducible
/// matrix and ResourceLimitError above `guard` states.
StationaryDistribution stationary_from_graphs(
    const TransitionMatrix& m, std::size_t guard = kDefaultEnumerationGuard);

/// Direct linear solve of pi = pi P with sum(pi) = 1. Throws
/// std::invalid_argument on a reducible matrix and NumericError when the
/// residual |pi P - pi|_inf is not below 1e-12.
StationaryDistribution stationary_solve(const TransitionMatrix& m);

/// Finite-state chain implied by the small-step approximation: off-diagonal
/// entries gamma_j * annotation for one-step arrows, remainder on the
/// diagonal.
TransitionMatrix analytic_phat(const OneStepGraph& graph);

struct PhatOptions {
  double epsilon = 0.005;
  double delta = 0.01;
  std::uint64_t trials = 1000;  ///< per source state
  std::uint64_t cap = 1'000'000;  ///< absorption step cap per trial
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Spill fraction above which estimate_phat records a warning.
inline constexpr double kSpillWarning = 0.01;

/// Monte Carlo estimate of the finite-state chain: from every pure strategy
/// state, apply one single-tremble step, run the unperturbed process to
/// absorption and count where it lands. Timeouts go to `spill` and are left
/// out of the row normalization.
///
/// Trial k of state s draws from an Rng seeded with
/// derive_seed(seed, s, k), so the result does not depend on `threads`.
TransitionMatrix estimate_phat(const Game& game, const PhatOptions& options);

}  // namespace pla

#endif  // PLA_MARKOV_HPP
