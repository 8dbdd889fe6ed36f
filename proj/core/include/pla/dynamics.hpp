#ifndef PLA_DYNAMICS_HPP
#define PLA_DYNAMICS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pla/game.hpp"
#include "pla/rng.hpp"

namespace pla {

/// Probability vector over one player's actions.
using MixedStrategy = std::vector<double>;

/// Markov state of the learning process: current joint action plus one mixed
/// strategy per player.
struct LearnerState {
  ActionProfile profile;
  std::vector<MixedStrategy> strategies;

  bool operator==(const LearnerState&) const = default;
};

struct LearnerConfig {
  double epsilon = 0.005;  ///< step size
  double lambda = 0.005;   ///< tremble probability
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument unless epsilon > 0, lambda in [0, 1] and
/// epsilon * max utility < 1.
void validate_config(const LearnerConfig& config, const Game& game);

/// Nonnegative components summing to 1 within `tol`.
bool is_valid_strategy(const MixedStrategy& x, double tol = 1e-12);

/// Throws std::invalid_argument if the state does not fit the game.
void validate_state(const Game& game, const LearnerState& state);

/// Pure strategy state: every strategy sits on the vertex of its action.
LearnerState pure_state(const Game& game, const ActionProfile& profile);
LearnerState pure_state(const Game& game, std::size_t profile_index);

/// Uniform strategies and a uniformly drawn profile.
LearnerState uniform_state(const Game& game, Rng& rng);

/// Threshold used by the drift alarm on strategy sums.
inline constexpr double kSimplexDriftAlarm = 1e-6;

/// Draws one action: with probability 1 - lambda from `strategy`, otherwise
/// uniformly over all actions. Consumes exactly two uniforms: the tremble
/// coin, then the draw.
std::size_t action_update(const MixedStrategy& strategy, double lambda,
                          Rng& rng);

/// Like action_update, also reporting whether the player trembled.
std::size_t action_update(const MixedStrategy& strategy, double lambda,
                          Rng& rng, bool& trembled);

/// x + epsilon * payoff * (e_chosen - x). Throws std::invalid_argument unless
/// 0 < epsilon * payoff < 1 and chosen is in range.
MixedStrategy strategy_update(const MixedStrategy& strategy, std::size_t chosen,
                              double payoff, double epsilon);

/// In-place variant without argument checks. Raises NumericError when the
/// updated sum drifts from 1 by more than kSimplexDriftAlarm.
void apply_strategy_update(MixedStrategy& strategy, std::size_t chosen,
                           double payoff, double epsilon);

/// One synchronous round: all players draw from their pre-step strategies
/// (player order, coin then draw), then each reinforces its realized action
/// with its own payoff. Returns how many players trembled.
std::size_t advance(const Game& game, LearnerState& state,
                    const LearnerConfig& config, Rng& rng);

LearnerState step(const Game& game, const LearnerState& state,
                  const LearnerConfig& config, Rng& rng);

/// Receives the state after every step of a run.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  /// `t` counts steps from 0; `snapshot` marks steps whose strategies are due
  /// for recording.
  virtual void on_step(std::uint64_t t, const LearnerState& state,
                       bool snapshot) = 0;
};

struct TraceRecord {
  std::uint64_t t;
  std::size_t profile_index;
};

struct StrategySnapshot {
  std::uint64_t t;
  std::vector<MixedStrategy> strategies;
};

/// In-memory trace. Use the streaming overload of run() for long runs.
struct Trace {
  LearnerConfig config;
  std::string game_id;
  std::uint64_t snapshot_every = 0;
  std::vector<TraceRecord> steps;
  std::vector<StrategySnapshot> snapshots;
};

/// Collects a Trace in memory.
class TraceRecorder : public TraceSink {
 public:
  explicit TraceRecorder(Trace& trace, const ProfileSpace& space)
      : trace_(trace), space_(space) {}
  void on_step(std::uint64_t t, const LearnerState& state,
               bool snapshot) override;

 private:
  Trace& trace_;
  const ProfileSpace& space_;
};

/// Runs `steps` steps from `init` with an RNG seeded from config.seed and
/// streams every step into `sink`. Strategies are flagged for snapshot every
/// `snapshot_every` steps (0 disables). Returns the final state.
LearnerState run(const Game& game, const LearnerState& init,
                 const LearnerConfig& config, std::uint64_t steps,
                 std::uint64_t snapshot_every, TraceSink& sink);

/// In-memory convenience wrapper. Throws std::invalid_argument if steps == 0.
Trace run(const Game& game, const LearnerState& init,
          const LearnerConfig& config, std::uint64_t steps,
          std::uint64_t snapshot_every);

struct AbsorptionResult {
  std::optional<std::size_t> state;  ///< absorbing profile index; empty on timeout
  std::uint64_t steps = 0;

  bool timed_out() const noexcept { return !state.has_value(); }
};

/// True when every player's largest strategy component exceeds 1 - delta.
bool is_absorbed(const LearnerState& state, double delta);

/// Runs the unperturbed process (lambda = 0) until is_absorbed holds, then
/// returns the profile of per-player argmax actions. Timeout after `cap`
/// steps is a result, not an exception.
AbsorptionResult run_unperturbed_to_absorption(const Game& game,
                                               LearnerState init,
                                               double epsilon, double delta,
                                               std::uint64_t cap, Rng& rng);

/// Pure strategy state whose delta-neighborhood contains the state, if any.
/// A state is in the neighborhood of s when every player's component for its
/// action in s exceeds 1 - delta; the per-player argmax (lowest index on
/// ties) is used so at most one state is returned.
std::optional<std::size_t> classify_state(const ProfileSpace& space,
                                          const LearnerState& state,
                                          double delta);

struct OccupancyReport {
  double delta = 0.0;
  std::uint64_t steps = 0;
  std::vector<std::uint64_t> counts;  ///< per profile index
  std::uint64_t residual = 0;

  double fraction(std::size_t profile_index) const;
  double residual_fraction() const;
  /// Profile index with the largest count; empty if every step was residual.
  std::optional<std::size_t> modal_state() const;
};

/// Counts neighborhood occupancy for every step it sees.
class OccupancyCounter : public TraceSink {
 public:
  OccupancyCounter(const ProfileSpace& space, double delta);
  void on_step(std::uint64_t t, const LearnerState& state,
               bool snapshot) override;
  const OccupancyReport& report() const noexcept { return report_; }

 private:
  const ProfileSpace& space_;
  OccupancyReport report_;
};

/// Occupancy from a recorded trace. Requires a snapshot at every step
/// (snapshot_every == 1); throws std::invalid_argument otherwise.
OccupancyReport occupancy(const Game& game, const Trace& trace, double delta);

/// Occupancy of a live run; exact counting without storing the trace.
OccupancyReport occupancy(const Game& game, const LearnerState& init,
                          const LearnerConfig& config, std::uint64_t steps,
                          double delta);

/// Forwards each step to several sinks.
class TeeSink : public TraceSink {
 public:
  explicit TeeSink(std::vector<TraceSink*> sinks) : sinks_(std::move(sinks)) {}
  void on_step(std::uint64_t t, const LearnerState& state,
               bool snapshot) override {
    for (auto* s : sinks_) s->on_step(t, state, snapshot);
  }

 private:
  std::vector<TraceSink*> sinks_;
};

}  // namespace pla

#endif  // PLA_DYNAMICS_HPP
