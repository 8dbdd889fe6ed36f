#include "pla/tremble.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pla {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
}

double check_step(double epsilon, double u) {
  const double a = epsilon * u;
  if (!(a > 0.0 && a < 1.0)) {
    throw std::invalid_argument("epsilon * u must lie in (0, 1), got " +
                                std::to_string(a));
  }
  return a;
}

}  // namespace

double phi_tremble(double lambda, std::size_t n) {
  check_lambda(lambda);
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  return 1.0 - std::pow(1.0 - lambda, static_cast<double>(n));
}

double psi_tremble(double lambda, std::size_t n) {
  check_lambda(lambda);
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (lambda == 0.0) {
    throw std::invalid_argument("psi is undefined at lambda = 0");
  }
  if (n == 1) return 0.0;
  const double nd = static_cast<double>(n);
  // 1 - (1-lambda)^n via log1p/expm1 keeps precision for tiny lambda.
  const double at_least_one = -std::expm1(nd * std::log1p(-lambda));
  const double exactly_one =
      nd * lambda * std::exp((nd - 1.0) * std::log1p(-lambda));
  return (at_least_one - exactly_one) / at_least_one;
}

double tremble_gamma(std::size_t n, std::size_t action_count) {
  if (n == 0 || action_count == 0) {
    throw std::invalid_argument("n and action count must be positive");
  }
  return 1.0 / (static_cast<double>(n) * static_cast<double>(action_count));
}

double eta(double delta, double tol) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("delta must lie in [0, 1]");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (delta == 1.0) return 0.0;
  const auto terms = static_cast<std::uint64_t>(std::ceil(1.0 / tol)) + 1;
  // Past this index delta^l is below half an ulp of 1 and the term is 1/l^2.
  const double saturate =
      delta > 0.0 ? std::ceil(-53.0 * std::log(2.0) / std::log(delta)) : 0.0;
  // Smallest terms first.
  double sum = 0.0;
  for (std::uint64_t l = terms; l >= 1; --l) {
    const double ld = static_cast<double>(l);
    const double head = ld > saturate ? 1.0 : 1.0 - std::pow(delta, ld);
    sum += head / (ld * ld);
  }
  return -sum;
}

std::uint64_t min_hitting_time(double delta, double epsilon, double u) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  const double a = check_step(epsilon, u);
  return static_cast<std::uint64_t>(
      std::ceil(std::log(delta) / std::log1p(-a)));
}

PathProbability shortest_path_prob(double delta, double epsilon, double u,
                                   double eta_tol) {
  const double a = check_step(epsilon, u);
  const std::uint64_t horizon = min_hitting_time(delta, epsilon, u);
  const double h = 1.0 - a;
  double log_exact = 0.0;
  double h_pow = 1.0;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    h_pow *= h;
    log_exact += std::log1p(-h_pow);
  }
  const double log_approx = eta(delta, eta_tol) / a;
  return {std::exp(log_exact), std::exp(log_approx), log_exact, log_approx};
}

SingleTremble sample_single_tremble(const Game& game, Rng& rng) {
  const std::size_t player = rng.below(game.players());
  return {player, rng.below(game.actions(player))};
}

}  // namespace pla
