#include "pla/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pla {

using nlohmann::json;

namespace {

json parse_or_throw(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Game parse_game_json(const std::string& text) {
  const json doc = parse_or_throw(text);
  if (!doc.is_object()) throw std::invalid_argument("game spec must be an object");
  for (const char* key : {"players", "actions", "utilities"}) {
    if (!doc.contains(key)) {
      throw std::invalid_argument(std::string("game spec lacks \"") + key +
                                  "\"");
    }
  }
  if (!doc["players"].is_number_unsigned() || doc["players"].get<int>() < 1) {
    throw std::invalid_argument("\"players\" must be a positive integer");
  }
  const auto n = doc["players"].get<std::size_t>();
  const json& actions = doc["actions"];
  if (!actions.is_array() || actions.size() != n) {
    throw std::invalid_argument("\"actions\" needs one label list per player");
  }
  std::vector<std::size_t> counts(n);
  std::vector<std::vector<std::string>> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!actions[i].is_array() || actions[i].empty()) {
      throw std::invalid_argument("player " + std::to_string(i) +
                                  " needs a nonempty action list");
    }
    for (const auto& label : actions[i]) {
      labels[i].push_back(label.is_string() ? label.get<std::string>()
                                            : label.dump());
    }
    counts[i] = labels[i].size();
  }

  const json& utilities = doc["utilities"];
  if (!utilities.is_object()) {
    throw std::invalid_argument("\"utilities\" must be an object");
  }
  const ProfileSpace space(counts);
  PayoffTable table{counts, std::vector<double>(space.size() * n)};
  for (std::size_t p = 0; p < space.size(); ++p) {
    const std::string key = space.label(p);
    auto it = utilities.find(key);
    if (it == utilities.end()) {
      throw std::invalid_argument("missing utilities for profile \"" + key +
                                  "\"");
    }
    if (!it->is_array() || it->size() != n) {
      throw std::invalid_argument("profile \"" + key + "\" needs " +
                                  std::to_string(n) + " utilities");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!(*it)[i].is_number()) {
        throw std::invalid_argument("profile \"" + key +
                                    "\" has a non-numeric utility");
      }
      table.values[p * n + i] = (*it)[i].get<double>();
    }
  }
  if (utilities.size() != space.size()) {
    for (const auto& [key, value] : utilities.items()) {
      bool known = false;
      try {
        std::vector<std::size_t> profile;
        std::stringstream ss(key);
        std::string part;
        while (std::getline(ss, part, ',')) profile.push_back(std::stoul(part));
        known = space.valid(profile) && space.label(space.encode(profile)) == key;
      } catch (const std::exception&) {
        known = false;
      }
      if (!known) {
        throw std::invalid_argument("utilities key \"" + key +
                                    "\" is not a profile of this game");
      }
    }
  }
  return Game(std::move(table), std::move(labels));
}

Game load_game(const std::string& path) { return parse_game_json(read_file(path)); }

std::string game_to_json(const Game& game) {
  const auto& space = game.space();
  json doc;
  doc["players"] = game.players();
  doc["actions"] = json::array();
  for (std::size_t i = 0; i < game.players(); ++i) {
    doc["actions"].push_back(game.action_labels(i));
  }
  json utilities = json::object();
  for (std::size_t p = 0; p < space.size(); ++p) {
    json row = json::array();
    for (std::size_t i = 0; i < game.players(); ++i) {
      row.push_back(game.utility(p, i));
    }
    utilities[space.label(p)] = std::move(row);
  }
  doc["utilities"] = std::move(utilities);
  return doc.dump(2);
}

Topology parse_topology_json(const std::string& text) {
  const json doc = parse_or_throw(text);
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("neighbors")) {
    throw std::invalid_argument("topology needs \"n\" and \"neighbors\"");
  }
  if (!doc["n"].is_number_unsigned()) {
    throw std::invalid_argument("\"n\" must be a positive integer");
  }
  try {
    return Topology::make(
        doc["n"].get<std::size_t>(),
        doc["neighbors"].get<std::vector<std::vector<std::size_t>>>());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad neighbor lists: ") + e.what());
  }
}

Topology load_topology(const std::string& path) {
  return parse_topology_json(read_file(path));
}

std::string topology_to_json(const Topology& topology) {
  return json{{"n", topology.n}, {"neighbors", topology.neighbors}}.dump(2);
}

std::string to_json(const OccupancyReport& report, const ProfileSpace& space) {
  json states = json::array();
  for (std::size_t p = 0; p < report.counts.size(); ++p) {
    states.push_back({{"state", space.label(p)},
                      {"count", report.counts[p]},
                      {"fraction", report.fraction(p)}});
  }
  json doc{{"delta", report.delta},
           {"steps", report.steps},
           {"residual", report.residual},
           {"residual_fraction", report.residual_fraction()},
           {"states", std::move(states)}};
  if (auto m = report.modal_state()) {
    doc["modal_state"] = space.label(*m);
  } else {
    doc["modal_state"] = nullptr;
  }
  return doc.dump(2);
}

namespace {

json wgraph_json(const WGraph& g, const ProfileSpace& space) {
  json arrows = json::array();
  for (const auto& a : g.arrows) {
    arrows.push_back({space.label(a.from), space.label(a.to)});
  }
  return arrows;
}

}  // namespace

std::string to_json(const ResistanceReport& report, const ProfileSpace& space) {
  json states = json::array();
  for (std::size_t s = 0; s < report.phi_star.size(); ++s) {
    json entry{{"state", space.label(s)},
               {"phi_star", report.phi_star[s]},
               {"g_star", wgraph_json(report.g_star[s], space)}};
    if (s < report.gamma_bar.size()) entry["gamma_bar"] = report.gamma_bar[s];
    states.push_back(std::move(entry));
  }
  json stable = json::array();
  for (std::size_t s : report.stable_set) stable.push_back(space.label(s));
  json doc{{"epsilon", report.epsilon},
           {"rho", report.rho},
           {"stable_set", std::move(stable)},
           {"strict_gap", report.strict_gap},
           {"states", std::move(states)}};
  doc["gap"] = report.gap ? json(*report.gap) : json(nullptr);
  return doc.dump(2);
}

std::string to_json(const TransitionMatrix& matrix) {
  const std::size_t n = matrix.size();
  json rows = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(matrix(i, j));
    rows.push_back(std::move(row));
  }
  json doc{{"provenance", to_string(matrix.provenance())},
           {"size", n},
           {"labels", matrix.labels},
           {"matrix", std::move(rows)}};
  if (!matrix.trials.empty()) {
    doc["trials"] = matrix.trials;
    doc["spill"] = matrix.spill;
  }
  doc["warnings"] = matrix.warnings;
  return doc.dump(2);
}

void write_csv(std::ostream& out, const TransitionMatrix& matrix) {
  const std::size_t n = matrix.size();
  const auto old_precision = out.precision(17);
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) out << ',';
    out << quoted(j < matrix.labels.size() ? matrix.labels[j]
                                           : std::to_string(j));
  }
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) out << ',';
      out << matrix(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void write_edge_list(std::ostream& out, const DirectedGraph& graph) {
  out << "from,to\n";
  for (const auto& [from, to] : graph.links) out << from << ',' << to << '\n';
}

TraceCsvWriter::TraceCsvWriter(std::ostream& out, const ProfileSpace& space,
                               double delta)
    : out_(out), space_(space), delta_(delta) {
  out_ << "t,profile,occupied_pss\n";
}

void TraceCsvWriter::on_step(std::uint64_t t, const LearnerState& state,
                             bool) {
  out_ << t << ',' << quoted(space_.label(space_.encode(state.profile))) << ',';
  if (auto s = classify_state(space_, state, delta_)) {
    out_ << quoted(space_.label(*s));
  }
  out_ << '\n';
}

void SnapshotJsonlWriter::on_step(std::uint64_t t, const LearnerState& state,
                                  bool snapshot) {
  if (!snapshot) return;
  json line{{"t", t}, {"strategies", state.strategies}};
  out_ << line.dump() << '\n';
}

}  // namespace pla
