#ifndef PLA_GAME_HPP
#define PLA_GAME_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pla {

/// One action index per player.
using ActionProfile = std::vector<std::size_t>;

/// Largest number of joint profiles any enumeration will touch.
inline constexpr std::uint64_t kMaxProfiles = 10'000'000;

/// Mixed-radix encoding of joint action profiles, player 0 least significant.
///
/// Profile indices double as pure-strategy-state indices everywhere in the
/// library.
class ProfileSpace {
 public:
  ProfileSpace() = default;
  /// Throws std::invalid_argument on an empty player list or a zero-sized
  /// action set, ResourceLimitError when the product exceeds kMaxProfiles.
  explicit ProfileSpace(std::vector<std::size_t> action_counts);

  std::size_t players() const noexcept { return counts_.size(); }
  std::size_t actions(std::size_t player) const { return counts_.at(player); }
  const std::vector<std::size_t>& action_counts() const noexcept {
    return counts_;
  }
  std::size_t size() const noexcept { return size_; }
  std::size_t stride(std::size_t player) const { return strides_.at(player); }

  bool valid(const ActionProfile& profile) const noexcept;
  std::size_t encode(const ActionProfile& profile) const;
  ActionProfile decode(std::size_t index) const;

  std::size_t action_of(std::size_t index, std::size_t player) const noexcept {
    return (index / strides_[player]) % counts_[player];
  }
  /// Index of the profile with `player`'s action replaced.
  std::size_t with_action(std::size_t index, std::size_t player,
                          std::size_t action) const noexcept {
    return index - action_of(index, player) * strides_[player] +
           action * strides_[player];
  }

  /// Comma-joined action indices, e.g. "0,1,1".
  std::string label(std::size_t index) const;

 private:
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Raw utility table, not yet checked for positivity.
///
/// values[profile_index * players + player] holds u_player(profile).
struct PayoffTable {
  std::vector<std::size_t> action_counts;
  std::vector<double> values;
};

struct UtilityViolation {
  std::size_t player;
  ActionProfile profile;
};

/// Every (player, profile) entry whose utility is not strictly positive.
/// Throws std::invalid_argument if the table has the wrong size.
std::vector<UtilityViolation> check_positive_utility(const PayoffTable& table);

/// Finite strategic-form game with strictly positive utilities.
///
/// Immutable after construction; all queries are const and thread-safe.
class Game {
 public:
  /// Throws std::invalid_argument if any utility is non-positive or
  /// non-finite, naming the first violating (player, profile).
  explicit Game(PayoffTable table);
  Game(PayoffTable table, std::vector<std::vector<std::string>> action_labels);

  std::size_t players() const noexcept { return space_.players(); }
  std::size_t actions(std::size_t player) const {
    return space_.actions(player);
  }
  std::size_t profile_count() const noexcept { return space_.size(); }
  const ProfileSpace& space() const noexcept { return space_; }

  /// Checked lookup. Throws std::invalid_argument on a bad player or profile.
  double utility(const ActionProfile& profile, std::size_t player) const;

  /// Unchecked lookup by profile index, for inner loops.
  double utility(std::size_t profile_index, std::size_t player) const noexcept {
    return values_[profile_index * space_.players() + player];
  }

  double max_utility() const noexcept { return max_utility_; }
  double min_utility() const noexcept { return min_utility_; }

  const std::vector<std::string>& action_labels(std::size_t player) const {
    return labels_.at(player);
  }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  ProfileSpace space_;
  std::vector<double> values_;
  std::vector<std::vector<std::string>> labels_;
  double max_utility_ = 0.0;
  double min_utility_ = 0.0;
};

/// argmax over player's actions of u_player(a, profile_{-player}), ascending.
/// Ties use exact equality on the stored values.
std::vector<std::size_t> best_response(const Game& game,
                                       const ActionProfile& profile,
                                       std::size_t player);
std::vector<std::size_t> best_response(const Game& game,
                                       std::size_t profile_index,
                                       std::size_t player);

/// Utility player earns at its best response to profile_{-player}.
double best_response_value(const Game& game, std::size_t profile_index,
                           std::size_t player);

bool is_nash(const Game& game, std::size_t profile_index);

/// Pure Nash equilibria in profile-index order.
std::vector<ActionProfile> nash_equilibria(const Game& game);
std::vector<std::size_t> nash_profile_indices(const Game& game);

struct CoordinationWitness {
  ActionProfile profile;
  std::size_t deviator;
  std::size_t action;  ///< the deviator's best response
  std::size_t harmed;  ///< player strictly worse off after the deviation
};

struct CoordinationCheck {
  bool holds = true;
  std::optional<CoordinationWitness> witness;
};

/// True iff no best-response deviation ever strictly lowers any player's
/// utility. Returns the first witness in profile order otherwise.
CoordinationCheck is_coordination_game(const Game& game);

struct BestBrMove {
  std::size_t deviator;
  std::size_t action;
  ActionProfile destination;
  double value;  ///< deviator's utility at the destination
};

/// Best-BR: among all players' best responses to the profile, the one paying
/// its player the most. Ties go to the lowest player, then the lowest action.
/// Players already best-responding participate, so the destination can equal
/// the input.
BestBrMove bbr(const Game& game, const ActionProfile& profile);

/// Best-BR restricted to players not currently best-responding, i.e. to moves
/// that change the profile. Empty at a Nash equilibrium.
std::optional<BestBrMove> improving_bbr(const Game& game,
                                        const ActionProfile& profile);

}  // namespace pla

#endif  // PLA_GAME_HPP
