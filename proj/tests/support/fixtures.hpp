#ifndef PLA_TESTS_FIXTURES_HPP
#define PLA_TESTS_FIXTURES_HPP

#include <initializer_list>
#include <vector>

#include "pla/game.hpp"

namespace fixture {

/// Game from per-profile utility rows listed in profile-index order
/// (player 0 varies fastest).
inline pla::Game game(std::vector<std::size_t> counts,
                      std::initializer_list<std::initializer_list<double>> rows) {
  pla::PayoffTable t{std::move(counts), {}};
  for (const auto& row : rows) t.values.insert(t.values.end(), row);
  return pla::Game(std::move(t));
}

/// Symmetric 2x2 coordination game: `a` on (0,0), `b` on (1,1), `off`
/// elsewhere.
inline pla::Game coordination(double a, double b, double off = 1.0) {
  return game({2, 2}, {{a, a}, {off, off}, {off, off}, {b, b}});
}

}  // namespace fixture

#endif  // PLA_TESTS_FIXTURES_HPP
