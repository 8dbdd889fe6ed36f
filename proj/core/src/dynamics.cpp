#include "pla/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pla/errors.hpp"

namespace pla {

void validate_config(const LearnerConfig& config, const Game& game) {
  if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (!(config.lambda >= 0.0 && config.lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  if (!(config.epsilon * game.max_utility() < 1.0)) {
    throw std::invalid_argument(
        "step-size bound violated: epsilon * max utility = " +
        std::to_string(config.epsilon * game.max_utility()) + " >= 1");
  }
}

bool is_valid_strategy(const MixedStrategy& x, double tol) {
  if (x.empty()) return false;
  double sum = 0.0;
  for (double v : x) {
    if (!(v >= 0.0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

void validate_state(const Game& game, const LearnerState& state) {
  if (!game.space().valid(state.profile)) {
    throw std::invalid_argument("state profile does not fit the game");
  }
  if (state.strategies.size() != game.players()) {
    throw std::invalid_argument("state needs one strategy per player");
  }
  for (std::size_t i = 0; i < game.players(); ++i) {
    if (state.strategies[i].size() != game.actions(i) ||
        !is_valid_strategy(state.strategies[i])) {
      throw std::invalid_argument("strategy of player " + std::to_string(i) +
                                  " is not a probability vector over its "
                                  "actions");
    }
  }
}

LearnerState pure_state(const Game& game, const ActionProfile& profile) {
  if (!game.space().valid(profile)) {
    throw std::invalid_argument("profile does not fit the game");
  }
  LearnerState s;
  s.profile = profile;
  s.strategies.resize(game.players());
  for (std::size_t i = 0; i < game.players(); ++i) {
    s.strategies[i].assign(game.actions(i), 0.0);
    s.strategies[i][profile[i]] = 1.0;
  }
  return s;
}

LearnerState pure_state(const Game& game, std::size_t profile_index) {
  return pure_state(game, game.space().decode(profile_index));
}

LearnerState uniform_state(const Game& game, Rng& rng) {
  LearnerState s;
  s.profile.resize(game.players());
  s.strategies.resize(game.players());
  for (std::size_t i = 0; i < game.players(); ++i) {
    const std::size_t k = game.actions(i);
    s.strategies[i].assign(k, 1.0 / static_cast<double>(k));
    s.profile[i] = rng.below(k);
  }
  return s;
}

namespace {

std::size_t sample_categorical(const MixedStrategy& x, double u) {
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] > 0.0) last_positive = k;
    acc += x[k];
    if (u < acc) return k;
  }
  // u landed in the rounding slack above the cumulative sum.
  return last_positive;
}

}  // namespace

std::size_t action_update(const MixedStrategy& strategy, double lambda,
                          Rng& rng, bool& trembled) {
  trembled = rng.bernoulli(lambda);
  if (trembled) return rng.below(strategy.size());
  return sample_categorical(strategy, rng.uniform());
}

std::size_t action_update(const MixedStrategy& strategy, double lambda,
                          Rng& rng) {
  bool trembled = false;
  return action_update(strategy, lambda, rng, trembled);
}

void apply_strategy_update(MixedStrategy& strategy, std::size_t chosen,
                           double payoff, double epsilon) {
  const double a = epsilon * payoff;
  double sum = 0.0;
  for (std::size_t k = 0; k < strategy.size(); ++k) {
    double target = k == chosen ? 1.0 : 0.0;
    strategy[k] += a * (target - strategy[k]);
    sum += strategy[k];
  }
  if (std::abs(sum - 1.0) > kSimplexDriftAlarm) {
    throw NumericError("strategy sum drifted to " + std::to_string(sum));
  }
}

MixedStrategy strategy_update(const MixedStrategy& strategy, std::size_t chosen,
                              double payoff, double epsilon) {
  const double a = epsilon * payoff;
  if (!(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("epsilon * payoff must lie in (0, 1), got " +
                                std::to_string(a));
  }
  if (chosen >= strategy.size()) {
    throw std::invalid_argument("chosen action is out of range");
  }
  MixedStrategy next = strategy;
  apply_strategy_update(next, chosen, payoff, epsilon);
  return next;
}

std::size_t advance(const Game& game, LearnerState& state,
                    const LearnerConfig& config, Rng& rng) {
  const std::size_t n = game.players();
  const auto& space = game.space();
  std::size_t trembles = 0;
  std::size_t index = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool trembled = false;
    state.profile[i] =
        action_update(state.strategies[i], config.lambda, rng, trembled);
    trembles += trembled ? 1 : 0;
    index += state.profile[i] * space.stride(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    apply_strategy_update(state.strategies[i], state.profile[i],
                          game.utility(index, i), config.epsilon);
  }
  return trembles;
}

LearnerState step(const Game& game, const LearnerState& state,
                  const LearnerConfig& config, Rng& rng) {
  LearnerState next = state;
  advance(game, next, config, rng);
  return next;
}

void TraceRecorder::on_step(std::uint64_t t, const LearnerState& state,
                            bool snapshot) {
  trace_.steps.push_back({t, space_.encode(state.profile)});
  if (snapshot) trace_.snapshots.push_back({t, state.strategies});
}

LearnerState run(const Game& game, const LearnerState& init,
                 const LearnerConfig& config, std::uint64_t steps,
                 std::uint64_t snapshot_every, TraceSink& sink) {
  validate_config(config, game);
  validate_state(game, init);
  Rng rng(config.seed);
  LearnerState state = init;
  for (std::uint64_t t = 0; t < steps; ++t) {
    advance(game, state, config, rng);
    bool snap = snapshot_every > 0 && t % snapshot_every == 0;
    sink.on_step(t, state, snap);
  }
  return state;
}

Trace run(const Game& game, const LearnerState& init,
          const LearnerConfig& config, std::uint64_t steps,
          std::uint64_t snapshot_every) {
  if (steps == 0) throw std::invalid_argument("run needs at least one step");
  Trace trace;
  trace.config = config;
  trace.snapshot_every = snapshot_every;
  trace.steps.reserve(static_cast<std::size_t>(steps));
  TraceRecorder recorder(trace, game.space());
  run(game, init, config, steps, snapshot_every, recorder);
  return trace;
}

bool is_absorbed(const LearnerState& state, double delta) {
  for (const auto& x : state.strategies) {
    if (!(*std::max_element(x.begin(), x.end()) > 1.0 - delta)) return false;
  }
  return true;
}

namespace {

std::size_t argmax_profile(const ProfileSpace& space,
                           const LearnerState& state) {
  std::size_t index = 0;
  for (std::size_t i = 0; i < state.strategies.size(); ++i) {
    const auto& x = state.strategies[i];
    auto a = static_cast<std::size_t>(
        std::max_element(x.begin(), x.end()) - x.begin());
    index += a * space.stride(i);
  }
  return index;
}

}  // namespace

AbsorptionResult run_unperturbed_to_absorption(const Game& game,
                                               LearnerState init,
                                               double epsilon, double delta,
                                               std::uint64_t cap, Rng& rng) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  LearnerConfig config{epsilon, 0.0, 0};
  validate_config(config, game);
  validate_state(game, init);
  AbsorptionResult result;
  while (!is_absorbed(init, delta)) {
    if (result.steps >= cap) return result;
    advance(game, init, config, rng);
    ++result.steps;
  }
  result.state = argmax_profile(game.space(), init);
  return result;
}

std::optional<std::size_t> classify_state(const ProfileSpace& space,
                                          const LearnerState& state,
                                          double delta) {
  if (!is_absorbed(state, delta)) return std::nullopt;
  return argmax_profile(space, state);
}

double OccupancyReport::fraction(std::size_t profile_index) const {
  if (steps == 0) return 0.0;
  return static_cast<double>(counts.at(profile_index)) /
         static_cast<double>(steps);
}

double OccupancyReport::residual_fraction() const {
  if (steps == 0) return 0.0;
  return static_cast<double>(residual) / static_cast<double>(steps);
}

std::optional<std::size_t> OccupancyReport::modal_state() const {
  auto it = std::max_element(counts.begin(), counts.end());
  if (it == counts.end() || *it == 0) return std::nullopt;
  return static_cast<std::size_t>(it - counts.begin());
}

OccupancyCounter::OccupancyCounter(const ProfileSpace& space, double delta)
    : space_(space) {
  report_.delta = delta;
  report_.counts.assign(space.size(), 0);
}

void OccupancyCounter::on_step(std::uint64_t, const LearnerState& state,
                               bool) {
  ++report_.steps;
  if (auto s = classify_state(space_, state, report_.delta)) {
    ++report_.counts[*s];
  } else {
    ++report_.residual;
  }
}

OccupancyReport occupancy(const Game& game, const Trace& trace, double delta) {
  if (trace.snapshot_every != 1 ||
      trace.snapshots.size() != trace.steps.size()) {
    throw std::invalid_argument(
        "occupancy from a trace needs a strategy snapshot at every step");
  }
  OccupancyCounter counter(game.space(), delta);
  LearnerState state;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    state.profile = game.space().decode(trace.steps[k].profile_index);
    state.strategies = trace.snapshots[k].strategies;
    counter.on_step(trace.steps[k].t, state, true);
  }
  return counter.report();
}

OccupancyReport occupancy(const Game& game, const LearnerState& init,
                          const LearnerConfig& config, std::uint64_t steps,
                          double delta) {
  OccupancyCounter counter(game.space(), delta);
  run(game, init, config, steps, 0, counter);
  return counter.report();
}

}  // namespace pla
