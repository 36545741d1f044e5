#include "wmlp/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wmlp/csv.hpp"
#include "wmlp/errors.hpp"

namespace wmlp::da {

int candidate_hidden(std::span<const double> candidate) {
  if (candidate.size() != 2) throw std::invalid_argument("tuning candidate must be (learning_rate, hidden)");
  return static_cast<int>(std::clamp(std::lround(candidate[1]), static_cast<long>(kMinHidden), static_cast<long>(kMaxHidden)));
}

double mlp_tuning_objective(std::span<const double> candidate, const nn::Dataset& train_set,
                            const nn::Dataset& val_set, const nn::TrainConfig& budget) {
  const int hidden = candidate_hidden(candidate);
  nn::TrainConfig cfg = budget;
  cfg.learning_rate = candidate[0];
  try {
    const nn::MlpParams init = nn::init_params(train_set.input_dim(), hidden, cfg.seed);
    const auto [params, report] = nn::train(init, train_set, val_set, cfg);
    return -nn::accuracy(params, val_set);
  } catch (const TrainingDivergedError&) {
    return std::numeric_limits<double>::infinity();
  }
}

TuningResult tune_mlp(const nn::Dataset& train_set, const nn::Dataset& val_set, const nn::TrainConfig& budget,
                      const DaConfig& cfg) {
  if (cfg.dim != 2) throw std::invalid_argument("tune_mlp: search space is two-dimensional");
  TuningResult result;
  const Objective objective = [&](std::span<const double> x) {
    const double f = mlp_tuning_objective(x, train_set, val_set, budget);
    result.evaluations.push_back({x[0], candidate_hidden(x), f});
    return f;
  };
  result.search = optimize(objective, cfg);
  result.learning_rate = result.search.best_position[0];
  result.hidden = candidate_hidden(result.search.best_position);
  result.fitness = result.search.best_fitness;
  return result;
}

void write_tuning_log(const std::vector<TuningEvaluation>& evals, const std::filesystem::path& path) {
  auto out = csv::open(path);
  out << "candidate_lr,candidate_hidden,fitness\n";
  for (const auto& e : evals) out << csv::num(e.learning_rate) << ',' << e.hidden << ',' << csv::num(e.fitness) << '\n';
  csv::close(out, path);
}

}  // namespace wmlp::da
