#include "wmlp/dragonfly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wmlp/csv.hpp"

namespace wmlp::da {

DaConfig DaConfig::benchmark(std::uint64_t seed) {
  return DaConfig{10, Position(10, -5.12), Position(10, 5.12), 30, 100, seed};
}

DaConfig DaConfig::tuning(std::uint64_t seed) { return DaConfig{2, {0.0001, 10.0}, {0.1, 200.0}, 10, 2, seed}; }

void DaConfig::validate() const {
  if (dim <= 0 || pop <= 0 || max_iter < 0) throw std::invalid_argument("DaConfig: dim and pop must be positive");
  if (lb.size() != static_cast<std::size_t>(dim) || ub.size() != static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("DaConfig: bounds must have dim entries");
  }
  for (int d = 0; d < dim; ++d) {
    if (!(lb[d] < ub[d])) throw std::invalid_argument("DaConfig: lb must be below ub in dimension " + std::to_string(d));
  }
}

DaState initialize_swarm(const DaConfig& cfg) {
  cfg.validate();
  DaState st;
  st.rng = Rng(cfg.seed);
  st.positions.assign(static_cast<std::size_t>(cfg.pop), Position(static_cast<std::size_t>(cfg.dim)));
  for (auto& x : st.positions) {
    for (int d = 0; d < cfg.dim; ++d) x[d] = st.rng.uniform(cfg.lb[d], cfg.ub[d]);
  }
  st.steps.assign(static_cast<std::size_t>(cfg.pop), Position(static_cast<std::size_t>(cfg.dim), 0.0));
  st.fitness.assign(static_cast<std::size_t>(cfg.pop), std::numeric_limits<double>::infinity());
  st.food = Record{st.positions.front(), std::numeric_limits<double>::infinity()};
  st.enemy = Record{st.positions.front(), -std::numeric_limits<double>::infinity()};
  return st;
}

namespace {

void clip(Position& x, const DaConfig& cfg) {
  for (int d = 0; d < cfg.dim; ++d) x[d] = std::clamp(x[d], cfg.lb[d], cfg.ub[d]);
}

bool acceptable(double f) { return !std::isnan(f) && f != -std::numeric_limits<double>::infinity(); }

}  // namespace

void evaluate_population(DaState& state, const DaConfig& cfg, const Objective& objective) {
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    double f = objective(state.positions[i]);
    if (!acceptable(f)) {
      clip(state.positions[i], cfg);
      f = objective(state.positions[i]);
      if (!acceptable(f)) {
        throw std::runtime_error("dragonfly: objective returned a non-finite value for individual " + std::to_string(i));
      }
    }
    state.fitness[i] = f;
  }
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    if (state.fitness[i] < state.food.fitness) state.food = Record{state.positions[i], state.fitness[i]};
  }
  std::size_t worst = 0;
  for (std::size_t i = 1; i < state.fitness.size(); ++i) {
    if (state.fitness[i] > state.fitness[worst]) worst = i;
  }
  state.enemy = Record{state.positions[worst], state.fitness[worst]};
}

BehaviorTerms behavior_terms(const DaState& state, std::size_t i, std::span<const std::size_t> neighbors) {
  if (i >= state.positions.size()) throw std::out_of_range("behavior_terms: invalid individual index");
  const Position& xi = state.positions[i];
  const std::size_t dim = xi.size();
  BehaviorTerms t{Position(dim, 0.0), Position(dim, 0.0), Position(dim, 0.0), Position(dim), Position(dim)};

  for (std::size_t j : neighbors) {
    if (j >= state.positions.size() || j == i) throw std::out_of_range("behavior_terms: invalid neighbour index");
    for (std::size_t d = 0; d < dim; ++d) {
      t.separation[d] -= xi[d] - state.positions[j][d];
      t.alignment[d] += state.steps[j][d];
      t.cohesion[d] += state.positions[j][d];
    }
  }
  if (!neighbors.empty()) {
    const auto n = static_cast<double>(neighbors.size());
    for (std::size_t d = 0; d < dim; ++d) {
      t.alignment[d] /= n;
      t.cohesion[d] = t.cohesion[d] / n - xi[d];
    }
  }
  for (std::size_t d = 0; d < dim; ++d) {
    t.food[d] = state.food.position[d] - xi[d];
    t.enemy[d] = xi[d] - state.enemy.position[d];
  }
  return t;
}

Position neighborhood_radius(const DaConfig& cfg, int t) {
  Position r(static_cast<std::size_t>(cfg.dim));
  const double progress = cfg.max_iter > 0 ? static_cast<double>(t) / cfg.max_iter : 0.0;
  for (int d = 0; d < cfg.dim; ++d) {
    const double span = cfg.ub[d] - cfg.lb[d];
    r[d] = span / 4.0 + 2.0 * span * progress;
  }
  return r;
}

std::vector<std::size_t> neighbors_of(const DaState& state, std::size_t i, std::span<const double> radius) {
  std::vector<std::size_t> out;
  const Position& xi = state.positions[i];
  for (std::size_t j = 0; j < state.positions.size(); ++j) {
    if (j == i) continue;
    bool inside = true;
    for (std::size_t d = 0; d < xi.size() && inside; ++d) inside = std::abs(state.positions[j][d] - xi[d]) <= radius[d];
    if (inside) out.push_back(j);
  }
  return out;
}

DaWeights scheduled_weights(int t, int max_iter, Rng& rng) {
  const double progress = max_iter > 0 ? std::clamp(static_cast<double>(t) / max_iter, 0.0, 1.0) : 1.0;
  const double beta = 0.1 * (1.0 - progress);
  DaWeights w;
  w.w = 0.9 - 0.5 * progress;
  w.s = 2.0 * rng.uniform() * beta;
  w.a = 2.0 * rng.uniform() * beta;
  w.c = 2.0 * rng.uniform() * beta;
  w.f = 2.0 * rng.uniform();
  w.e = beta;
  return w;
}

Position levy_flight(int dim, Rng& rng) {
  constexpr double beta = 1.5;
  static const double sigma =
      std::pow(std::tgamma(1.0 + beta) * std::sin(std::numbers::pi * beta / 2.0) /
                   (std::tgamma((1.0 + beta) / 2.0) * beta * std::pow(2.0, (beta - 1.0) / 2.0)),
               1.0 / beta);
  Position step(static_cast<std::size_t>(dim));
  for (double& s : step) {
    const double r1 = rng.normal() * sigma;
    const double r2 = rng.normal();
    s = 0.01 * r1 / std::pow(std::abs(r2), 1.0 / beta);
  }
  return step;
}

void da_step(DaState& state, const DaWeights& weights, const DaConfig& cfg, const Objective& objective) {
  const int t = state.iteration + 1;
  const Position radius = neighborhood_radius(cfg, t);

  // Neighbourhoods and terms use the positions from the start of the iteration.
  const DaState before = state;
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    Position& x = state.positions[i];
    Position& dx = state.steps[i];
    const std::vector<std::size_t> nbrs = neighbors_of(before, i, radius);
    if (!nbrs.empty()) {
      const BehaviorTerms bt = behavior_terms(before, i, nbrs);
      for (int d = 0; d < cfg.dim; ++d) {
        const double limit = (cfg.ub[d] - cfg.lb[d]) / 10.0;
        const double step = weights.s * bt.separation[d] + weights.a * bt.alignment[d] + weights.c * bt.cohesion[d] +
                            weights.f * bt.food[d] + weights.e * bt.enemy[d] + weights.w * dx[d];
        dx[d] = std::clamp(step, -limit, limit);
        x[d] += dx[d];
      }
    } else {
      const Position levy = levy_flight(cfg.dim, state.rng);
      for (int d = 0; d < cfg.dim; ++d) {
        x[d] += levy[d] * x[d];
        dx[d] = 0.0;
      }
    }
    clip(x, cfg);
  }
  state.iteration = t;
  evaluate_population(state, cfg, objective);
}

OptimizeResult optimize(const Objective& objective, const DaConfig& cfg) {
  DaState state = initialize_swarm(cfg);
  evaluate_population(state, cfg, objective);
  OptimizeResult out;
  out.trace.reserve(static_cast<std::size_t>(cfg.max_iter) + 1);
  out.trace.push_back(state.food.fitness);
  for (int t = 1; t <= cfg.max_iter; ++t) {
    const DaWeights w = scheduled_weights(t, cfg.max_iter, state.rng);
    da_step(state, w, cfg, objective);
    out.trace.push_back(state.food.fitness);
  }
  out.best_position = state.food.position;
  out.best_fitness = state.food.fitness;
  return out;
}

double rastrigin(std::span<const double> x) {
  double sum = 10.0 * static_cast<double>(x.size());
  for (double v : x) sum += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return sum;
}

void write_trace(const std::vector<double>& trace, const std::string& path) {
  auto out = csv::open(path);
  out << "iteration,best_fitness\n";
  for (std::size_t t = 0; t < trace.size(); ++t) out << t << ',' << csv::num(trace[t]) << '\n';
  csv::close(out, path);
}

}  // namespace wmlp::da
