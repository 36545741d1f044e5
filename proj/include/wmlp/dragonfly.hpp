#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "wmlp/rng.hpp"

namespace wmlp::da {

using Position = std::vector<double>;

/// Fitness to minimize. Must be pure within one run. +infinity marks a
/// rejected candidate; NaN and -infinity are errors.
using Objective = std::function<double(std::span<const double>)>;

struct DaConfig {
  int dim = 10;
  Position lb;
  Position ub;
  int pop = 30;
  int max_iter = 100;
  std::uint64_t seed = 1;

  /// Rastrigin benchmark: dim 10, [-5.12, 5.12], 30 dragonflies, 100 iterations.
  static DaConfig benchmark(std::uint64_t seed = 1);

  /// MLP tuning: (learning rate, hidden units) in [1e-4, 0.1] x [10, 200],
  /// 10 dragonflies, 2 iterations.
  static DaConfig tuning(std::uint64_t seed = 1);

  /// Throws std::invalid_argument unless dims agree and lb < ub everywhere.
  void validate() const;
};

/// Behaviour coefficients and inertia for one iteration.
struct DaWeights {
  double s = 0.0;  // separation
  double a = 0.0;  // alignment
  double c = 0.0;  // cohesion
  double f = 0.0;  // food attraction
  double e = 0.0;  // enemy distraction
  double w = 0.0;  // inertia
};

struct Record {
  Position position;
  double fitness = std::numeric_limits<double>::infinity();
};

struct DaState {
  std::vector<Position> positions;
  std::vector<Position> steps;
  std::vector<double> fitness;  // of the current positions
  Record food;                  // best seen so far
  Record enemy;                 // worst of the current population
  int iteration = 0;
  Rng rng{1};
};

/// Uniform positions, zero steps, food at individual 0 with fitness +inf.
/// Nothing is evaluated yet.
DaState initialize_swarm(const DaConfig& cfg);

/// Evaluates every individual and refreshes food and enemy.
void evaluate_population(DaState& state, const DaConfig& cfg, const Objective& objective);

struct BehaviorTerms {
  Position separation;  // S = -sum_j (X_i - X_j)
  Position alignment;   // A = mean neighbour step
  Position cohesion;    // C = mean neighbour position - X_i
  Position food;        // F = X_food - X_i
  Position enemy;       // E = X_i - X_enemy, points away from the enemy
};

BehaviorTerms behavior_terms(const DaState& state, std::size_t i, std::span<const std::size_t> neighbors);

/// Per-dimension neighbourhood radius (ub - lb) / 4 + 2 (ub - lb) t / max_iter.
Position neighborhood_radius(const DaConfig& cfg, int t);

/// Indices j != i whose position lies within `radius` of X_i in every dimension.
std::vector<std::size_t> neighbors_of(const DaState& state, std::size_t i, std::span<const double> radius);

/// Scheduled coefficients at iteration t in [1, max_iter]: inertia 0.9 -> 0.4,
/// beta 0.1 -> 0; s, a, c = 2 u beta, f = 2 u, e = beta with fresh u draws.
DaWeights scheduled_weights(int t, int max_iter, Rng& rng);

/// Mantegna Levy flight (beta = 1.5), scaled by 0.01.
Position levy_flight(int dim, Rng& rng);

/// One iteration: move every dragonfly, clip, evaluate, update food/enemy.
void da_step(DaState& state, const DaWeights& weights, const DaConfig& cfg, const Objective& objective);

struct OptimizeResult {
  Position best_position;
  double best_fitness = std::numeric_limits<double>::infinity();
  std::vector<double> trace;  // best fitness after initial evaluation and after each step
};

OptimizeResult optimize(const Objective& objective, const DaConfig& cfg);

double rastrigin(std::span<const double> x);

/// CSV with header iteration,best_fitness.
void write_trace(const std::vector<double>& trace, const std::string& path);

}  // namespace wmlp::da
