#include "pla/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pla/errors.hpp"

namespace pla {

namespace {

std::string profile_text(const ActionProfile& profile) {
  std::string out;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(profile[i]);
  }
  return out;
}

}  // namespace

ProfileSpace::ProfileSpace(std::vector<std::size_t> action_counts)
    : counts_(std::move(action_counts)) {
  if (counts_.empty()) {
    throw std::invalid_argument("a game needs at least one player");
  }
  strides_.resize(counts_.size());
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] == 0) {
      throw std::invalid_argument("player " + std::to_string(i) +
                                  " has an empty action set");
    }
    strides_[i] = static_cast<std::size_t>(total);
    total *= counts_[i];
    if (total > kMaxProfiles) {
      throw ResourceLimitError("profile enumeration", total, kMaxProfiles);
    }
  }
  size_ = static_cast<std::size_t>(total);
}

bool ProfileSpace::valid(const ActionProfile& profile) const noexcept {
  if (profile.size() != counts_.size()) return false;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (profile[i] >= counts_[i]) return false;
  }
  return true;
}

std::size_t ProfileSpace::encode(const ActionProfile& profile) const {
  if (!valid(profile)) {
    throw std::invalid_argument("profile (" + profile_text(profile) +
                                ") is out of range");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    index += profile[i] * strides_[i];
  }
  return index;
}

ActionProfile ProfileSpace::decode(std::size_t index) const {
  if (index >= size_) {
    throw std::invalid_argument("profile index " + std::to_string(index) +
                                " is out of range");
  }
  ActionProfile profile(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    profile[i] = index % counts_[i];
    index /= counts_[i];
  }
  return profile;
}

std::string ProfileSpace::label(std::size_t index) const {
  return profile_text(decode(index));
}

std::vector<UtilityViolation> check_positive_utility(const PayoffTable& table) {
  ProfileSpace space(table.action_counts);
  const std::size_t n = space.players();
  if (table.values.size() != space.size() * n) {
    throw std::invalid_argument(
        "utility table has " + std::to_string(table.values.size()) +
        " entries, expected " + std::to_string(space.size() * n));
  }
  std::vector<UtilityViolation> violations;
  for (std::size_t p = 0; p < space.size(); ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      double u = table.values[p * n + i];
      // NaN fails the comparison and is reported as well.
      if (!(u > 0.0) || !std::isfinite(u)) {
        violations.push_back({i, space.decode(p)});
      }
    }
  }
  return violations;
}

Game::Game(PayoffTable table) : Game(std::move(table), {}) {}

Game::Game(PayoffTable table,
           std::vector<std::vector<std::string>> action_labels)
    : space_(table.action_counts), labels_(std::move(action_labels)) {
  auto violations = check_positive_utility(table);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw std::invalid_argument(
        "utility of player " + std::to_string(v.player) + " at profile (" +
        profile_text(v.profile) + ") is not strictly positive (" +
        std::to_string(violations.size()) + " violation(s) in total)");
  }
  values_ = std::move(table.values);

  if (labels_.empty()) {
    labels_.resize(space_.players());
    for (std::size_t i = 0; i < space_.players(); ++i) {
      for (std::size_t a = 0; a < space_.actions(i); ++a) {
        labels_[i].push_back(std::to_string(a));
      }
    }
  }
  if (labels_.size() != space_.players()) {
    throw std::invalid_argument("action labels given for " +
                                std::to_string(labels_.size()) +
                                " players, game has " +
                                std::to_string(space_.players()));
  }
  for (std::size_t i = 0; i < space_.players(); ++i) {
    if (labels_[i].size() != space_.actions(i)) {
      throw std::invalid_argument("label count mismatch for player " +
                                  std::to_string(i));
    }
  }

  auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  min_utility_ = *lo;
  max_utility_ = *hi;
}

double Game::utility(const ActionProfile& profile, std::size_t player) const {
  if (player >= players()) {
    throw std::invalid_argument("player " + std::to_string(player) +
                                " is out of range");
  }
  return utility(space_.encode(profile), player);
}

std::vector<std::size_t> best_response(const Game& game,
                                       std::size_t profile_index,
                                       std::size_t player) {
  const auto& space = game.space();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> argmax;
  for (std::size_t a = 0; a < space.actions(player); ++a) {
    double u = game.utility(space.with_action(profile_index, player, a), player);
    if (u > best) {
      best = u;
      argmax.assign(1, a);
    } else if (u == best) {
      argmax.push_back(a);
    }
  }
  return argmax;
}

std::vector<std::size_t> best_response(const Game& game,
                                       const ActionProfile& profile,
                                       std::size_t player) {
  if (player >= game.players()) {
    throw std::invalid_argument("player " + std::to_string(player) +
                                " is out of range");
  }
  return best_response(game, game.space().encode(profile), player);
}

double best_response_value(const Game& game, std::size_t profile_index,
                           std::size_t player) {
  const auto& space = game.space();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < space.actions(player); ++a) {
    best = std::max(
        best, game.utility(space.with_action(profile_index, player, a), player));
  }
  return best;
}

bool is_nash(const Game& game, std::size_t profile_index) {
  for (std::size_t i = 0; i < game.players(); ++i) {
    if (game.utility(profile_index, i) <
        best_response_value(game, profile_index, i)) {
      return false;
    }
  }
  return true;
}

std::vector<std::size_t> nash_profile_indices(const Game& game) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < game.profile_count(); ++p) {
    if (is_nash(game, p)) out.push_back(p);
  }
  return out;
}

std::vector<ActionProfile> nash_equilibria(const Game& game) {
  std::vector<ActionProfile> out;
  for (std::size_t p : nash_profile_indices(game)) {
    out.push_back(game.space().decode(p));
  }
  return out;
}

CoordinationCheck is_coordination_game(const Game& game) {
  const auto& space = game.space();
  const std::size_t n = game.players();
  for (std::size_t p = 0; p < space.size(); ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a : best_response(game, p, i)) {
        std::size_t q = space.with_action(p, i, a);
        for (std::size_t j = 0; j < n; ++j) {
          if (game.utility(q, j) < game.utility(p, j)) {
            return {false, CoordinationWitness{space.decode(p), i, a, j}};
          }
        }
      }
    }
  }
  return {};
}

namespace {

std::optional<BestBrMove> best_br_impl(const Game& game,
                                       const ActionProfile& profile,
                                       bool movers_only) {
  const auto& space = game.space();
  const std::size_t p = space.encode(profile);
  std::optional<BestBrMove> best;
  for (std::size_t i = 0; i < game.players(); ++i) {
    auto br = best_response(game, p, i);
    if (movers_only &&
        std::find(br.begin(), br.end(), profile[i]) != br.end()) {
      continue;
    }
    // br is ascending, so br.front() is the lowest-index best response.
    double value = game.utility(space.with_action(p, i, br.front()), i);
    if (!best || value > best->value) {
      ActionProfile dest = profile;
      dest[i] = br.front();
      best = BestBrMove{i, br.front(), std::move(dest), value};
    }
  }
  return best;
}

}  // namespace

BestBrMove bbr(const Game& game, const ActionProfile& profile) {
  return *best_br_impl(game, profile, false);
}

std::optional<BestBrMove> improving_bbr(const Game& game,
                                        const ActionProfile& profile) {
  return best_br_impl(game, profile, true);
}

}  // namespace pla
