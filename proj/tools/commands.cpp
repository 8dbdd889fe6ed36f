#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pla/dynamics.hpp"
#include "pla/errors.hpp"
#include "pla/graphs.hpp"
#include "pla/io.hpp"
#include "pla/markov.hpp"
#include "pla/netform.hpp"
#include "pla/rng.hpp"
#include "pla/stability.hpp"
#include "pla/tremble.hpp"

namespace pla::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = PLA_VERSION;

// Maximum |pi_wgraph - pi_solve| tolerated by analyze.
constexpr double kMethodTolerance = 1e-6;

struct SimulateArgs {
  std::string game;
  double epsilon = 0.005;
  double lambda = 0.005;
  double delta = 0.01;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t snapshot_every = 0;
  std::string out = ".";
};

struct AnalyzeArgs {
  std::string game;
  double epsilon = 0.005;
  double delta = kDefaultAnnotationDelta;
  double rho = kDefaultStabilityRho;
  std::uint64_t mc_trials = 0;
  std::uint64_t mc_cap = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t guard = kDefaultEnumerationGuard;
  std::string out = ".";
};

struct NetformArgs {
  std::size_t n = 6;
  std::string topology;
  double kappa = 0.5;
  double offset = kDefaultNetformOffset;
  double epsilon = 0.005;
  double lambda = 0.005;
  double delta = 0.01;
  std::uint64_t steps = 2'000'000;
  std::uint64_t seed = 0;
  std::uint64_t seeds = 1;
  std::uint64_t metric_every = 1;
  std::string direction = "from";
  std::string out = ".";
};

class Writer {
 public:
  explicit Writer(const std::string& dir) : dir_(dir) {
    fs::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    files_.push_back(name);
    return f;
  }

  void text(const std::string& name, const std::string& body) {
    auto f = open(name);
    f << body << '\n';
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void write_manifest(Writer& w, const std::string& command, json config,
                    const Stopwatch& clock) {
  json manifest{{"command", command},
                {"config", std::move(config)},
                {"tool", "pla"},
                {"tool_version", kVersion},
                {"outputs", w.files()},
                {"runtime_seconds", clock.seconds()}};
  w.text("manifest.json", manifest.dump(2));
}

json pi_json(const std::vector<double>& pi, const ProfileSpace& space) {
  json out = json::object();
  for (std::size_t s = 0; s < pi.size(); ++s) out[space.label(s)] = pi[s];
  return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  Stopwatch clock;
  if (a.steps == 0) throw std::invalid_argument("--steps must be at least 1");
  if (!(a.delta > 0.0 && a.delta < 1.0)) {
    throw std::invalid_argument("--delta must lie in (0, 1)");
  }
  const Game game = load_game(a.game);
  const LearnerConfig config{a.epsilon, a.lambda, a.seed};
  validate_config(config, game);

  // Uniform strategies; the first profile comes from its own stream.
  Rng init_rng(derive_seed(a.seed, 1, 0));
  const LearnerState init = uniform_state(game, init_rng);

  Writer w(a.out);
  auto trace = w.open("trace.csv");
  TraceCsvWriter trace_writer(trace, game.space(), a.delta);
  OccupancyCounter counter(game.space(), a.delta);
  std::vector<TraceSink*> sinks{&trace_writer, &counter};
  std::ofstream snapshots;
  std::unique_ptr<SnapshotJsonlWriter> snapshot_writer;
  if (a.snapshot_every > 0) {
    snapshots = w.open("snapshots.jsonl");
    snapshots.precision(17);
    snapshot_writer = std::make_unique<SnapshotJsonlWriter>(snapshots);
    sinks.push_back(snapshot_writer.get());
  }
  TeeSink tee(sinks);
  run(game, init, config, a.steps, a.snapshot_every, tee);
  trace.close();
  if (snapshots.is_open()) snapshots.close();

  w.text("occupancy.json", to_json(counter.report(), game.space()));
  write_manifest(w, "simulate",
                 {{"game", a.game},
                  {"epsilon", a.epsilon},
                  {"lambda", a.lambda},
                  {"delta", a.delta},
                  {"steps", a.steps},
                  {"seed", a.seed},
                  {"snapshot_every", a.snapshot_every}},
                 clock);

  const auto& report = counter.report();
  out << "steps " << report.steps << ", residual fraction "
      << report.residual_fraction();
  if (auto m = report.modal_state()) {
    out << ", modal state " << game.space().label(*m) << " ("
        << report.fraction(*m) << ")";
  }
  out << '\n';
  return kExitOk;
}

// Stationary distribution by both methods; fills `doc` and returns the
// method gap.
double stationary_both(const TransitionMatrix& m, std::size_t guard,
                       const ProfileSpace& space, json& doc) {
  const auto by_graphs = stationary_from_graphs(m, guard);
  const auto by_solve = stationary_solve(m);
  const double diff = max_abs_diff(by_graphs.pi, by_solve.pi);
  doc = {{"provenance", to_string(m.provenance())},
         {"wgraph", pi_json(by_graphs.pi, space)},
         {"solve", pi_json(by_solve.pi, space)},
         {"max_abs_difference", diff}};
  return diff;
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  Stopwatch clock;
  const Game game = load_game(a.game);
  const auto& space = game.space();
  if (space.size() > a.guard) {
    throw ResourceLimitError("W-graph enumeration (--guard)", space.size(),
                             a.guard);
  }
  const OneStepGraph graph = build_one_step_graph(game, a.epsilon, a.delta);
  const ResistanceReport report = stochastically_stable_set(graph, a.rho);
  const TransitionMatrix analytic = [&] {
    auto m = analytic_phat(graph);
    for (std::size_t s = 0; s < space.size(); ++s) m.labels.push_back(space.label(s));
    return m;
  }();
  if (!is_irreducible(analytic)) {
    throw NumericError(
        "analytic transition annotations underflow to zero at this epsilon; "
        "the analytic chain is reducible");
  }

  Writer w(a.out);
  json graph_doc{{"states", space.size()},
                 {"arrows", graph.arrows().size()},
                 {"epsilon", graph.epsilon},
                 {"annotation_delta", graph.annotation_delta},
                 {"eta", graph.eta_value},
                 {"gamma", graph.gamma()}};
  json arrows = json::array();
  for (const auto& arrow : graph.arrows()) {
    arrows.push_back({{"from", space.label(arrow.from)},
                      {"to", space.label(arrow.to)},
                      {"deviator", arrow.deviator},
                      {"weight", arrow.weight},
                      {"annotation", arrow.annotation}});
  }
  graph_doc["arrow_list"] = std::move(arrows);
  w.text("one_step_graph.json", graph_doc.dump(2));
  w.text("phat_analytic.json", to_json(analytic));
  {
    auto f = w.open("phat_analytic.csv");
    write_csv(f, analytic);
  }

  json stationary = json::object();
  json analytic_doc;
  double worst = stationary_both(analytic, a.guard, space, analytic_doc);
  stationary["analytic"] = std::move(analytic_doc);

  if (a.mc_trials > 0) {
    PhatOptions options;
    options.epsilon = a.epsilon;
    options.delta = a.delta;
    options.trials = a.mc_trials;
    options.cap = a.mc_cap;
    options.seed = a.seed;
    options.threads = a.threads;
    const auto mc = estimate_phat(game, options);
    for (const auto& warning : mc.warnings) err << "warning: " << warning << '\n';
    w.text("phat_mc.json", to_json(mc));
    {
      auto f = w.open("phat_mc.csv");
      write_csv(f, mc);
    }
    if (is_irreducible(mc)) {
      json mc_doc;
      worst = std::max(worst, stationary_both(mc, a.guard, space, mc_doc));
      stationary["monte_carlo"] = std::move(mc_doc);
    } else {
      // Rare escapes may go unobserved; that is a sampling outcome.
      err << "warning: Monte Carlo estimate is reducible; no stationary "
             "distribution reported for it\n";
      stationary["monte_carlo"] = {{"reducible", true}};
    }
  }
  w.text("stationary.json", stationary.dump(2));
  w.text("report.json", to_json(report, space));

  json nash = json::array();
  for (std::size_t s : nash_profile_indices(game)) nash.push_back(space.label(s));
  json config{{"game", a.game},      {"epsilon", a.epsilon},
              {"delta", a.delta},    {"rho", a.rho},
              {"mc_trials", a.mc_trials}, {"mc_cap", a.mc_cap},
              {"seed", a.seed},      {"threads", a.threads},
              {"guard", a.guard},    {"nash_states", std::move(nash)}};
  write_manifest(w, "analyze", std::move(config), clock);

  out << "stable set:";
  for (std::size_t s : report.stable_set) out << " [" << space.label(s) << "]";
  out << (report.strict_gap ? "" : " (no strict gap)") << '\n';
  out << "stationary method difference " << worst << '\n';
  if (!(worst <= kMethodTolerance)) {
    err << "error: stationary distributions from the two methods differ by "
        << worst << " (> " << kMethodTolerance << ")\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_netform(const NetformArgs& a, std::ostream& out) {
  Stopwatch clock;
  if (a.steps == 0) throw std::invalid_argument("--steps must be at least 1");
  if (a.seeds == 0) throw std::invalid_argument("--seeds must be at least 1");
  NetformConfig config;
  config.topology = a.topology.empty() ? Topology::ring(a.n) : load_topology(a.topology);
  config.kappa = a.kappa;
  config.offset = a.offset;
  config.epsilon = a.epsilon;
  config.lambda = a.lambda;
  config.steps = a.steps;
  config.delta = a.delta;
  config.direction = a.direction == "to" ? DistanceDirection::to_node
                                         : DistanceDirection::from_node;

  const Game game = make_netform_game(config.topology, a.kappa, a.offset);
  validate_config({a.epsilon, a.lambda, a.seed}, game);
  const auto metrics = metric_table(config.topology, game, config.direction);
  const auto& space = game.space();

  Writer w(a.out);
  auto summary = w.open("summary.csv");
  summary << std::setprecision(17)
          << "seed,running_average,modal_state,modal_critically_connected,"
             "modal_is_wheel,nash_fraction,residual_fraction\n";
  for (std::uint64_t k = 0; k < a.seeds; ++k) {
    config.seed = a.seed + k;
    const std::string suffix = a.seeds == 1 ? "" : "_seed" + std::to_string(config.seed);
    auto metric = w.open("metric" + suffix + ".csv");
    metric << std::setprecision(17) << "t,running_average\n";
    const auto result = run_netform(
        game, metrics, config, a.metric_every,
        [&](std::uint64_t t, double avg) { metric << t << ',' << avg << '\n'; });
    metric.close();
    {
      auto edges = w.open("edges" + suffix + ".csv");
      write_edge_list(edges, result.final_graph);
    }
    w.text("occupancy" + suffix + ".json", to_json(result.occupancy, space));
    summary << config.seed << ',' << result.running_average << ',';
    if (result.modal_state) summary << '"' << space.label(*result.modal_state) << '"';
    summary << ',' << result.modal_critically_connected << ','
            << result.modal_is_wheel << ',' << result.nash_fraction << ','
            << result.occupancy.residual_fraction() << '\n';
    out << "seed " << config.seed << ": running average "
        << result.running_average << ", modal state "
        << (result.modal_critically_connected ? "critically connected"
                                              : "not critically connected")
        << (result.modal_is_wheel ? " (wheel)" : "") << '\n';
  }
  summary.close();

  write_manifest(w, "netform",
                 {{"n", config.topology.n},
                  {"topology", a.topology.empty() ? json("ring") : json(a.topology)},
                  {"neighbors", config.topology.neighbors},
                  {"kappa", a.kappa},
                  {"offset", a.offset},
                  {"epsilon", a.epsilon},
                  {"lambda", a.lambda},
                  {"delta", a.delta},
                  {"steps", a.steps},
                  {"seed", a.seed},
                  {"seeds", a.seeds},
                  {"metric_every", a.metric_every},
                  {"direction", a.direction}},
                 clock);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Perturbed learning automata on positive-utility games"};
  app.set_version_flag("--version", std::string("pla ") + kVersion);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run the learning dynamics on a game");
  simulate->add_option("--game", sim.game, "Game spec JSON")->required();
  simulate->add_option("--epsilon", sim.epsilon, "Step size")->capture_default_str();
  simulate->add_option("--lambda", sim.lambda, "Tremble probability")->capture_default_str();
  simulate->add_option("--delta", sim.delta, "Pure-state neighborhood radius")->capture_default_str();
  simulate->add_option("--steps", sim.steps, "Number of steps T (>= 1)")->required();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--snapshot-every", sim.snapshot_every,
                       "Strategy snapshot interval (0 = none)")->capture_default_str();
  simulate->add_option("--out", sim.out, "Output directory")->capture_default_str();

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Resistance and stationary analysis of a game");
  analyze->add_option("--game", an.game, "Game spec JSON")->required();
  analyze->add_option("--epsilon", an.epsilon, "Step size")->capture_default_str();
  analyze->add_option("--delta", an.delta, "Annotation and absorption radius")->capture_default_str();
  analyze->add_option("--rho", an.rho, "Relative tolerance of the stable level set")->capture_default_str();
  analyze->add_option("--mc-trials", an.mc_trials,
                      "Monte Carlo trials per state (0 = skip)")->capture_default_str();
  analyze->add_option("--mc-cap", an.mc_cap, "Absorption step cap per trial")->capture_default_str();
  analyze->add_option("--seed", an.seed, "Master seed")->capture_default_str();
  analyze->add_option("--threads", an.threads, "Monte Carlo worker cap")
      ->capture_default_str()->check(CLI::PositiveNumber);
  analyze->add_option("--guard", an.guard, "Maximum states for W-graph enumeration")
      ->capture_default_str();
  analyze->add_option("--out", an.out, "Output directory")->capture_default_str();

  NetformArgs nf;
  auto* netform = app.add_subcommand("netform", "Network formation experiment");
  netform->add_option("--n", nf.n, "Ring size when no topology file is given")->capture_default_str();
  netform->add_option("--topology", nf.topology, "Topology JSON (overrides --n)");
  netform->add_option("--kappa", nf.kappa, "Link cost in (0, 1)")->capture_default_str();
  netform->add_option("--offset", nf.offset, "Uniform utility offset")->capture_default_str();
  netform->add_option("--epsilon", nf.epsilon, "Step size")->capture_default_str();
  netform->add_option("--lambda", nf.lambda, "Tremble probability")->capture_default_str();
  netform->add_option("--delta", nf.delta, "Pure-state neighborhood radius")->capture_default_str();
  netform->add_option("--steps", nf.steps, "Steps per seed")->capture_default_str();
  netform->add_option("--seed", nf.seed, "First seed")->capture_default_str();
  netform->add_option("--seeds", nf.seeds, "Number of consecutive seeds")->capture_default_str();
  netform->add_option("--metric-every", nf.metric_every,
                      "Metric CSV row interval (0 = none)")->capture_default_str();
  netform->add_option("--direction", nf.direction, "Distance direction")
      ->capture_default_str()->check(CLI::IsMember({"from", "to"}));
  netform->add_option("--out", nf.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (analyze->parsed()) return cmd_analyze(an, out, err);
    if (netform->parsed()) return cmd_netform(nf, out);
  } catch (const ResourceLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace pla::cli
