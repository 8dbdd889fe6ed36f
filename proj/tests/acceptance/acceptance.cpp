// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any
// fail. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pla/dynamics.hpp"
#include "pla/graphs.hpp"
#include "pla/markov.hpp"
#include "pla/netform.hpp"
#include "pla/stability.hpp"
#include "pla/tremble.hpp"

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within_3_sigma(std::uint64_t hits, std::uint64_t trials, double p) {
  const double n = static_cast<double>(trials);
  return std::abs(static_cast<double>(hits) - n * p) <= 3.0 * std::sqrt(n * p * (1.0 - p));
}

bool subset_of_nash(const pla::ResistanceReport& r, const pla::Game& g) {
  const auto ne = pla::nash_profile_indices(g);
  return std::all_of(r.stable_set.begin(), r.stable_set.end(),
                     [&](std::size_t s) { return std::binary_search(ne.begin(), ne.end(), s); });
}

// Network formation on the 6-ring at full scale.
Outcome criterion1() {
  const double lo = 1.0 / 6.0 - 0.02, hi = 1.0 / 6.0 + 0.005;
  pla::NetformConfig config;
  config.topology = pla::Topology::ring(6);
  config.kappa = 0.5;
  config.epsilon = config.lambda = 0.005;
  config.steps = 2'000'000;
  const auto game = pla::make_netform_game(config.topology, config.kappa, config.offset);
  const auto metrics = pla::metric_table(config.topology, game);
  int good = 0, wheels = 0;
  double min_avg = 1.0, max_avg = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    config.seed = seed;
    const auto r = pla::run_netform(game, metrics, config);
    const bool in_band = r.running_average >= lo && r.running_average <= hi;
    good += in_band && r.modal_critically_connected;
    wheels += r.modal_is_wheel;
    min_avg = std::min(min_avg, r.running_average);
    max_avg = std::max(max_avg, r.running_average);
  }
  return {good >= 8, fmt("%d/10 seeds in band with critically connected modal state; "
                         "averages in [%.5f, %.5f]; wheel modal in %d/10",
                         good, min_avg, max_avg, wheels)};
}

// Stable sets of random coordination games lie inside the Nash set.
Outcome criterion2() {
  oracle::Engine rng(2002);
  int violations = 0, rejected = 0;
  for (int k = 0; k < 20; ++k) {
    std::vector<std::size_t> counts;
    const std::size_t players = k < 10 ? 2 : 3;
    for (std::size_t i = 0; i < players; ++i) counts.push_back(oracle::pick(rng, 2, players == 2 ? 4 : 3));
    const auto g = oracle::random_coordination_game(rng, counts);
    if (!pla::is_coordination_game(g).holds) {
      ++rejected;
      continue;
    }
    violations += !subset_of_nash(pla::stochastically_stable_set(g, 0.5 / g.max_utility()), g);
  }
  return {violations == 0 && rejected == 0,
          fmt("20 games, %d violations, %d failed the coordination check", violations, rejected)};
}

// Simulated occupancy against the stationary law of the estimated chain.
Outcome criterion3() {
  constexpr double a = 150, b = 100, off = 40;
  const pla::Game g(pla::PayoffTable{{2, 2}, {a, a, off, off, off, off, b, b}});
  int agree = 0, low_mass = 0;
  double min_mass = 1.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    pla::Rng init_rng(pla::derive_seed(seed, 3, 0));
    const auto init = pla::uniform_state(g, init_rng);
    const auto occ = pla::occupancy(g, init, {0.005, 0.005, seed}, 1'000'000, 0.05);
    const double mass = occ.fraction(0) + occ.fraction(3);
    min_mass = std::min(min_mass, mass);
    low_mass += mass < 0.9;

    pla::PhatOptions options;
    options.epsilon = 0.005;
    options.delta = 0.05;
    options.trials = 20000;
    options.seed = seed;
    const auto phat = pla::estimate_phat(g, options);
    if (!pla::is_irreducible(phat)) continue;
    const auto pi = pla::stationary_from_graphs(phat).pi;
    agree += (occ.fraction(0) > occ.fraction(3)) == (pi[0] > pi[3]);
  }
  return {low_mass == 0 && agree > 5,
          fmt("Nash mass >= 0.9 in %d/10 seeds (min %.4f); ranking agrees in %d/10", 10 - low_mass,
              min_mass, agree)};
}

// W-graph stationary law against the linear solve.
Outcome criterion4() {
  oracle::Engine rng(4004);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto m = oracle::random_irreducible(rng, oracle::pick(rng, 3, 7), k % 2 ? 0.3 : 0.8);
    const auto x = pla::stationary_from_graphs(m).pi;
    const auto y = pla::stationary_solve(m).pi;
    for (std::size_t s = 0; s < x.size(); ++s) worst = std::max(worst, std::abs(x[s] - y[s]));
  }
  return {worst < 1e-9, fmt("100 chains, max |difference| %.3g", worst)};
}

// Minimum resistance against exhaustive enumeration.
Outcome criterion5() {
  const std::vector<std::vector<std::size_t>> shapes{{2, 2}, {2, 3}, {3, 2}, {2, 4}, {4, 2}, {2, 2, 2}, {8}};
  oracle::Engine rng(5005);
  int bad = 0, checked = 0;
  for (int k = 0; k < 100; ++k) {
    const auto g = oracle::random_game(rng, shapes[k % shapes.size()]);
    const auto graph = pla::build_one_step_graph(g, 0.5 / g.max_utility());
    for (std::size_t root = 0; root < graph.nodes(); ++root) {
      const auto m = pla::min_resistance(graph, root);
      const auto brute = oracle::brute_min_resistance(graph, root);
      const double attained = pla::graph_resistance(m.g_star, graph);
      ++checked;
      bad += !(std::abs(m.phi_star - brute.value) <= 1e-12 * brute.value &&
               std::abs(attained - brute.value) <= 1e-12 * brute.value &&
               !pla::wgraph_violation(m.g_star).has_value());
    }
  }
  return {bad == 0, fmt("100 graphs, %d roots checked, %d mismatches", checked, bad)};
}

// Small-step constants.
Outcome criterion6() {
  const double e0 = pla::eta(0.0, 1e-7);
  const double target = -std::numbers::pi * std::numbers::pi / 6.0;
  const bool c_eta0 = std::abs(e0 - target) < 1e-6;
  const bool c_eta1 = pla::eta(1.0) == 0.0;
  const auto t = pla::min_hitting_time(0.01, 0.1, 1.0);
  const double eta_d = pla::eta(0.1);
  double prev = INFINITY, last = 0.0;
  bool decreasing = true;
  for (double eu : {0.05, 0.02, 0.01, 0.005}) {
    const double err = std::abs(pla::shortest_path_prob(0.1, eu, 1.0).log_exact * eu - eta_d) / std::abs(eta_d);
    decreasing &= err < prev;
    prev = last = err;
  }
  const bool conv = decreasing && last < 0.1;
  return {c_eta0 && c_eta1 && t == 44 && conv,
          fmt("eta(0)+pi^2/6 = %.2g, eta(1) = %g, T = %llu, relative error at 0.005 = %.4f%s", e0 - target,
              pla::eta(1.0), static_cast<unsigned long long>(t), last, decreasing ? "" : " (not decreasing)")};
}

// Absorption of the unperturbed process and the geometric closed form.
Outcome criterion7() {
  oracle::Engine rng(7007);
  std::uint64_t absorbed = 0, total = 0;
  double worst_gap = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto g = oracle::random_game(rng, {2, 2});
    for (int r = 0; r < 100; ++r) {
      pla::LearnerState s;
      for (std::size_t i = 0; i < 2; ++i) {
        const double p = oracle::uniform(rng, 0.0, 1.0);
        s.strategies.push_back({p, 1.0 - p});
        s.profile.push_back(oracle::pick(rng, 0, 1));
      }
      pla::Rng walk(pla::derive_seed(7, k, r));
      const auto res = pla::run_unperturbed_to_absorption(g, s, 0.1, 1e-3, 100'000, walk);
      absorbed += res.state.has_value();
      ++total;
    }
    // Constant play of one profile from an interior start.
    const std::size_t prof = oracle::pick(rng, 0, 3);
    std::vector<pla::MixedStrategy> x{{0.5, 0.5}, {0.3, 0.7}};
    for (int t = 1; t <= 300; ++t) {
      for (std::size_t i = 0; i < 2; ++i) {
        const std::size_t a = g.space().action_of(prof, i);
        const double gap0 = 1.0 - (i == 0 ? 0.5 : (a == 0 ? 0.3 : 0.7));
        pla::apply_strategy_update(x[i], a, g.utility(prof, i), 0.1);
        const double closed = std::pow(1.0 - 0.1 * g.utility(prof, i), t) * gap0;
        worst_gap = std::max(worst_gap, std::abs((1.0 - x[i][a]) - closed));
      }
    }
  }
  const double rate = static_cast<double>(absorbed) / static_cast<double>(total);
  return {rate >= 0.99 && worst_gap < 1e-12,
          fmt("%llu/%llu absorbed within 1e5 steps; worst closed-form deviation %.3g",
              static_cast<unsigned long long>(absorbed), static_cast<unsigned long long>(total), worst_gap)};
}

// Tremble kernel frequencies.
Outcome criterion8() {
  oracle::Engine orng(8008);
  const auto g = oracle::random_game(orng, {2, 3, 4});
  const std::uint64_t samples = 100'000;
  pla::Rng rng(8);
  std::vector<std::vector<std::uint64_t>> counts{std::vector<std::uint64_t>(2), std::vector<std::uint64_t>(3),
                                                 std::vector<std::uint64_t>(4)};
  for (std::uint64_t k = 0; k < samples; ++k) {
    const auto t = pla::sample_single_tremble(g, rng);
    ++counts[t.player][t.action];
  }
  int cells_ok = 0, cells = 0;
  for (std::size_t j = 0; j < 3; ++j) {
    for (auto c : counts[j]) {
      ++cells;
      cells_ok += within_3_sigma(c, samples, pla::tremble_gamma(3, g.actions(j)));
    }
  }
  const double lambda = 0.05;
  pla::Rng sim(88);
  auto state = pla::uniform_state(g, sim);
  const pla::LearnerConfig config{0.5 / g.max_utility(), lambda, 0};
  std::uint64_t any = 0;
  for (std::uint64_t k = 0; k < samples; ++k) any += pla::advance(g, state, config, sim) > 0;
  const double phi = pla::phi_tremble(lambda, 3);
  const bool rate_ok = within_3_sigma(any, samples, phi);
  return {cells_ok == cells && rate_ok,
          fmt("%d/%d kernel cells within 3 sigma; tremble rate %.5f vs %.5f", cells_ok, cells,
              static_cast<double>(any) / samples, phi)};
}

// Scaling invariances and long-run simplex drift.
Outcome criterion9() {
  oracle::Engine rng(9009);
  int changed = 0;
  for (int k = 0; k < 20; ++k) {
    const auto g = oracle::random_game(rng, k % 2 ? std::vector<std::size_t>{2, 3}
                                                  : std::vector<std::size_t>{2, 2, 2});
    const double eps = 0.5 / g.max_utility();
    const auto base = pla::stochastically_stable_set(g, eps).stable_set;
    pla::PayoffTable t{g.space().action_counts(), g.values()};
    for (auto& v : t.values) v *= 3.0;
    const pla::Game scaled(std::move(t));
    changed += pla::stochastically_stable_set(g, eps / 2).stable_set != base;
    changed += pla::stochastically_stable_set(scaled, eps / 3).stable_set != base;
  }
  double drift = 0.0, lowest = 1.0;
  for (int k = 0; k < 3; ++k) {
    const auto g = oracle::random_game(rng, {3, 3, 2});
    pla::Rng sim(pla::derive_seed(9, k, 0));
    auto s = pla::uniform_state(g, sim);
    const pla::LearnerConfig config{0.9 / g.max_utility(), 0.05, 0};
    for (int step = 0; step < 1'000'000; ++step) {
      pla::advance(g, s, config, sim);
      for (const auto& x : s.strategies) {
        double sum = 0.0;
        for (double v : x) {
          sum += v;
          lowest = std::min(lowest, v);
        }
        drift = std::max(drift, std::abs(sum - 1.0));
      }
    }
  }
  return {changed == 0 && drift < 1e-9 && lowest >= 0.0,
          fmt("%d stable-set changes over 40 transformations; max simplex drift %.3g, min component %.3g",
              changed, drift, lowest)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3,
                                                       criterion4, criterion5, criterion6,
                                                       criterion7, criterion8, criterion9};
  std::set<int> selected;
  for (int k = 1; k < argc; ++k) selected.insert(std::atoi(argv[k]));
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s  %s (%.1fs)\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
