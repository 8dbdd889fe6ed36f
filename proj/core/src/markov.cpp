#include "pla/markov.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "pla/dynamics.hpp"
#include "pla/errors.hpp"
#include "pla/rng.hpp"
#include "pla/tremble.hpp"

namespace pla {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::monte_carlo:
      return "monte-carlo";
    case Provenance::analytic:
      return "analytic";
    case Provenance::given:
      return "given";
  }
  return "unknown";
}

TransitionMatrix::TransitionMatrix(std::size_t size,
                                   std::vector<double> row_major,
                                   Provenance provenance, double row_tol)
    : size_(size), p_(std::move(row_major)), provenance_(provenance) {
  if (size_ == 0) throw std::invalid_argument("empty transition matrix");
  if (p_.size() != size_ * size_) {
    throw std::invalid_argument("transition matrix data has the wrong size");
  }
  for (std::size_t i = 0; i < size_; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < size_; ++j) {
      const double v = p_[i * size_ + j];
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("transition entries must be finite and "
                                    "nonnegative");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > row_tol) {
      throw std::invalid_argument("row " + std::to_string(i) + " sums to " +
                                  std::to_string(sum));
    }
  }
}

bool is_irreducible(const TransitionMatrix& m) {
  const std::size_t n = m.size();
  // Strongly connected iff state 0 reaches all and all reach state 0.
  for (bool forward : {true, false}) {
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t w = 0; w < n; ++w) {
        const double entry = forward ? m(v, w) : m(w, v);
        if (!seen[w] && entry > 0.0) {
          seen[w] = true;
          ++count;
          queue.push_back(w);
        }
      }
    }
    if (count != n) return false;
  }
  return true;
}

double graph_weight(const WGraph& g, const TransitionMatrix& m) {
  double product = 1.0;
  for (const auto& a : g.arrows) product *= m(a.from, a.to);
  return product;
}

double graph_log_weight(const WGraph& g, const TransitionMatrix& m) {
  double total = 0.0;
  for (const auto& a : g.arrows) total += std::log(m(a.from, a.to));
  return total;
}

namespace {

// Streaming log-sum-exp.
class LogSum {
 public:
  void add(double log_value) {
    if (log_value == -std::numeric_limits<double>::infinity()) return;
    if (log_value > max_) {
      sum_ = sum_ * std::exp(max_ - log_value) + 1.0;
      max_ = log_value;
    } else {
      sum_ += std::exp(log_value - max_);
    }
  }
  double value() const {
    return sum_ == 0.0 ? -std::numeric_limits<double>::infinity()
                       : max_ + std::log(sum_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

void require_irreducible(const TransitionMatrix& m) {
  if (!is_irreducible(m)) {
    throw std::invalid_argument(
        "transition matrix is reducible; the stationary distribution is not "
        "unique");
  }
}

}  // namespace

StationaryDistribution stationary_from_graphs(const TransitionMatrix& m,
                                              std::size_t guard) {
  const std::size_t n = m.size();
  if (n > guard) {
    throw ResourceLimitError("W-graph stationary distribution", n, guard);
  }
  require_irreducible(m);

  std::vector<std::vector<std::size_t>> successors(n);
  std::vector<double> log_p(n * n, -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      if (k != l && m(k, l) > 0.0) {
        successors[k].push_back(l);
        log_p[k * n + l] = std::log(m(k, l));
      }
    }
  }

  std::vector<double> log_r(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> target(n, false);
    target[s] = true;
    LogSum acc;
    for_each_w_graph(n, successors, target,
                     [&](const std::vector<std::size_t>& choice) {
                       double w = 0.0;
                       for (std::size_t k = 0; k < n; ++k) {
                         if (k != s) w += log_p[k * n + choice[k]];
                       }
                       acc.add(w);
                     });
    log_r[s] = acc.value();
  }

  LogSum total;
  for (double v : log_r) total.add(v);
  StationaryDistribution out{std::vector<double>(n), StationaryMethod::wgraph};
  for (std::size_t s = 0; s < n; ++s) {
    out.pi[s] = std::exp(log_r[s] - total.value());
  }
  return out;
}

StationaryDistribution stationary_solve(const TransitionMatrix& m) {
  require_irreducible(m);
  const auto n = static_cast<Eigen::Index>(m.size());
  // Balance equations sum_i pi_i P(i,j) = pi_j. The diagonal is taken as
  // minus the off-diagonal row sum instead of P(j,j) - 1, which would cancel
  // tiny escape probabilities away.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const double p = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      a(j, i) = p;
      a(i, i) -= p;
    }
  }
  // Equilibrate rows so escape rates of very different magnitudes are
  // resolved to relative precision.
  for (Eigen::Index j = 0; j < n; ++j) {
    const double scale = a.row(j).cwiseAbs().maxCoeff();
    if (scale > 0.0) a.row(j) /= scale;
  }
  // One balance equation is redundant; replace it with normalization.
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd x = a.fullPivLu().solve(b);

  StationaryDistribution out{std::vector<double>(m.size()),
                             StationaryMethod::solve};
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(x(i)) || x(i) < -1e-12) {
      throw NumericError("linear solve produced an invalid probability");
    }
    out.pi[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
  }

  double residual = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    double flow = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) flow += out.pi[i] * m(i, j);
    residual = std::max(residual, std::abs(flow - out.pi[j]));
  }
  if (!(residual < 1e-12)) {
    throw NumericError("stationary solve residual " + std::to_string(residual) +
                       " exceeds 1e-12");
  }
  return out;
}

TransitionMatrix analytic_phat(const OneStepGraph& graph) {
  if (graph.gamma().empty()) {
    throw std::invalid_argument("graph carries no tremble probabilities");
  }
  const std::size_t n = graph.nodes();
  std::vector<double> p(n * n, 0.0);
  for (const auto& a : graph.arrows()) {
    p[a.from * n + a.to] = graph.gamma()[a.deviator] * a.annotation;
  }
  for (std::size_t k = 0; k < n; ++k) {
    double off = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      if (l != k) off += p[k * n + l];
    }
    p[k * n + k] = 1.0 - off;
  }
  return TransitionMatrix(n, std::move(p), Provenance::analytic, 1e-12);
}

TransitionMatrix estimate_phat(const Game& game, const PhatOptions& options) {
  if (options.trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (!(options.delta > 0.0 && options.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  validate_config({options.epsilon, 0.0, options.seed}, game);

  const auto& space = game.space();
  const std::size_t n = space.size();
  std::vector<std::uint64_t> counts(n * n, 0);
  std::vector<std::uint64_t> spill(n, 0);

  auto run_row = [&](std::size_t s) {
    const LearnerState start = pure_state(game, s);
    for (std::uint64_t k = 0; k < options.trials; ++k) {
      Rng rng(derive_seed(options.seed, s, k));
      const auto tremble = sample_single_tremble(game, rng);
      LearnerState state = start;
      state.profile[tremble.player] = tremble.action;
      const std::size_t realized =
          space.with_action(s, tremble.player, tremble.action);
      for (std::size_t i = 0; i < game.players(); ++i) {
        apply_strategy_update(state.strategies[i], state.profile[i],
                              game.utility(realized, i), options.epsilon);
      }
      const auto result = run_unperturbed_to_absorption(
          game, std::move(state), options.epsilon, options.delta, options.cap,
          rng);
      if (result.timed_out()) {
        ++spill[s];
      } else {
        ++counts[s * n + *result.state];
      }
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.threads,
                                      static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t s = 0; s < n; ++s) run_row(s);
  } else {
    // Rows are disjoint, so workers write to separate slices.
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t s = next++; s < n; s = next++) run_row(s);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<double> p(n * n, 0.0);
  std::vector<std::string> warnings;
  for (std::size_t s = 0; s < n; ++s) {
    const std::uint64_t landed = options.trials - spill[s];
    if (landed == 0) {
      p[s * n + s] = 1.0;
      warnings.push_back("state " + space.label(s) +
                         ": every trial timed out; row set to a self-loop");
      continue;
    }
    for (std::size_t t = 0; t < n; ++t) {
      p[s * n + t] = static_cast<double>(counts[s * n + t]) /
                     static_cast<double>(landed);
    }
    const double spill_fraction =
        static_cast<double>(spill[s]) / static_cast<double>(options.trials);
    if (spill_fraction > kSpillWarning) {
      warnings.push_back("state " + space.label(s) + ": spill fraction " +
                         std::to_string(spill_fraction) + " exceeds 1%");
    }
  }
  // Renormalize away floating rounding so rows sum to 1 as closely as
  // possible; counts are the authoritative record.
  for (std::size_t s = 0; s < n; ++s) {
    double sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) sum += p[s * n + t];
    for (std::size_t t = 0; t < n; ++t) p[s * n + t] /= sum;
  }

  TransitionMatrix out(n, std::move(p), Provenance::monte_carlo, 1e-9);
  out.trials.assign(n, options.trials);
  out.spill = std::move(spill);
  out.warnings = std::move(warnings);
  for (std::size_t s = 0; s < n; ++s) out.labels.push_back(space.label(s));
  return out;
}

}  // namespace pla
