#ifndef PLA_IO_HPP
#define PLA_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pla/dynamics.hpp"
#include "pla/game.hpp"
#include "pla/markov.hpp"
#include "pla/netform.hpp"
#include "pla/stability.hpp"

namespace pla {

// Parsers throw std::invalid_argument with a description of the first
// problem found. Serializers emit doubles so that they round-trip exactly.

/// {"players": n, "actions": [[labels...]...],
///  "utilities": {"a0,a1,...": [u_0, ..., u_{n-1}], ...}}
Game parse_game_json(const std::string& text);
Game load_game(const std::string& path);
std::string game_to_json(const Game& game);

/// {"n": n, "neighbors": [[...], ...]}
Topology parse_topology_json(const std::string& text);
Topology load_topology(const std::string& path);
std::string topology_to_json(const Topology& topology);

std::string to_json(const OccupancyReport& report, const ProfileSpace& space);
std::string to_json(const ResistanceReport& report, const ProfileSpace& space);
std::string to_json(const TransitionMatrix& matrix);
/// Row-major CSV; the header holds the quoted state labels.
void write_csv(std::ostream& out, const TransitionMatrix& matrix);
/// Directed links as "from,to" lines under a header.
void write_edge_list(std::ostream& out, const DirectedGraph& graph);

/// Streams `t,profile,occupied_pss` rows. occupied_pss is the pure strategy
/// state within delta of the strategies, empty when there is none.
class TraceCsvWriter : public TraceSink {
 public:
  TraceCsvWriter(std::ostream& out, const ProfileSpace& space, double delta);
  void on_step(std::uint64_t t, const LearnerState& state,
               bool snapshot) override;

 private:
  std::ostream& out_;
  const ProfileSpace& space_;
  double delta_;
};

/// One JSON object per snapshot: {"t": t, "strategies": [[...], ...]}.
class SnapshotJsonlWriter : public TraceSink {
 public:
  explicit SnapshotJsonlWriter(std::ostream& out) : out_(out) {}
  void on_step(std::uint64_t t, const LearnerState& state,
               bool snapshot) override;

 private:
  std::ostream& out_;
};

/// Reads a whole file; throws std::invalid_argument if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace pla

#endif  // PLA_IO_HPP
