#include "wmlp/neuralnet.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "wmlp/csv.hpp"
#include "wmlp/errors.hpp"
#include "wmlp/rng.hpp"

namespace wmlp::nn {

bool MlpParams::valid() const {
  return w1.rows() > 0 && w1.cols() > 0 && b1.size() == w1.rows() && w2.cols() == w1.rows() && w2.rows() > 0 &&
         b2.size() == w2.rows() && w1.allFinite() && b1.allFinite() && w2.allFinite() && b2.allFinite();
}

bool operator==(const MlpParams& a, const MlpParams& b) {
  const auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return same(a.w1, b.w1) && same(a.b1, b.b1) && same(a.w2, b.w2) && same(a.b2, b.b2);
}

MlpParams init_params(int input_dim, int hidden_dim, std::uint64_t seed) {
  if (input_dim <= 0 || hidden_dim <= 0) throw std::invalid_argument("init_params: dimensions must be positive");
  Rng rng(seed);
  auto fill = [&rng](Matrix& m) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(m.cols()));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      // Open interval: redraw the (practically impossible) lower endpoint.
      double u = rng.uniform();
      while (u == 0.0) u = rng.uniform();
      m.data()[i] = bound * (2.0 * u - 1.0);
    }
  };
  MlpParams p{Matrix(hidden_dim, input_dim), Vector::Zero(hidden_dim), Matrix(kNumClasses, hidden_dim),
              Vector::Zero(kNumClasses)};
  fill(p.w1);
  fill(p.w2);
  return p;
}

MlpParams zeros_like(const MlpParams& p) {
  return {Matrix::Zero(p.w1.rows(), p.w1.cols()), Vector::Zero(p.b1.size()), Matrix::Zero(p.w2.rows(), p.w2.cols()),
          Vector::Zero(p.b2.size())};
}

Eigen::MatrixXd softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j) {
    const double m = logits.col(j).maxCoeff();
    out.col(j) = (logits.col(j).array() - m).exp();
    out.col(j) /= out.col(j).sum();
  }
  return out;
}

namespace {

void check_input(const MlpParams& p, const Eigen::MatrixXd& x) {
  if (x.rows() != p.input_dim()) {
    throw std::invalid_argument("input dimension " + std::to_string(x.rows()) + " does not match network input " +
                                std::to_string(p.input_dim()));
  }
}

void check_labels(std::span<const int> labels, Eigen::Index batch, int classes) {
  if (batch == 0) throw std::invalid_argument("loss_and_grads: empty batch");
  if (static_cast<Eigen::Index>(labels.size()) != batch) throw std::invalid_argument("loss_and_grads: label count mismatch");
  for (int y : labels) {
    if (y < 0 || y >= classes) throw std::invalid_argument("loss_and_grads: label out of range: " + std::to_string(y));
  }
}

double penalty(const MlpParams& p, double l2) {
  return l2 > 0.0 ? 0.5 * l2 * (p.w1.squaredNorm() + p.w2.squaredNorm()) : 0.0;
}

double cross_entropy(const Eigen::MatrixXd& probs, std::span<const int> labels) {
  double total = 0.0;
  for (std::size_t j = 0; j < labels.size(); ++j) total -= std::log(probs(labels[j], static_cast<Eigen::Index>(j)));
  return total / static_cast<double>(labels.size());
}

}  // namespace

ForwardResult forward(const MlpParams& p, const Eigen::MatrixXd& x) {
  check_input(p, x);
  ForwardResult r;
  r.hidden = ((p.w1 * x).colwise() + p.b1).cwiseMax(0.0);
  r.probs = softmax((p.w2 * r.hidden).colwise() + p.b2);
  return r;
}

double loss(const MlpParams& p, const Eigen::MatrixXd& x, std::span<const int> labels, double l2) {
  check_input(p, x);
  check_labels(labels, x.cols(), p.output_dim());
  return cross_entropy(forward(p, x).probs, labels) + penalty(p, l2);
}

LossAndGrads loss_and_grads(const MlpParams& p, const Eigen::MatrixXd& x, std::span<const int> labels, double l2) {
  check_input(p, x);
  check_labels(labels, x.cols(), p.output_dim());
  const ForwardResult f = forward(p, x);
  const auto batch = static_cast<double>(labels.size());

  // d(loss)/d(logits) = (probs - onehot) / batch
  Eigen::MatrixXd dlogits = f.probs;
  for (std::size_t j = 0; j < labels.size(); ++j) dlogits(labels[j], static_cast<Eigen::Index>(j)) -= 1.0;
  dlogits /= batch;

  Eigen::MatrixXd dhidden = p.w2.transpose() * dlogits;
  dhidden.array() *= (f.hidden.array() > 0.0).cast<double>();

  LossAndGrads out;
  out.loss = cross_entropy(f.probs, labels) + penalty(p, l2);
  out.grads.w2 = dlogits * f.hidden.transpose();
  out.grads.b2 = dlogits.rowwise().sum();
  out.grads.w1 = dhidden * x.transpose();
  out.grads.b1 = dhidden.rowwise().sum();
  if (l2 > 0.0) {
    out.grads.w1 += l2 * p.w1;
    out.grads.w2 += l2 * p.w2;
  }
  return out;
}

int argmax(std::span<const double> probs) {
  int best = 0;
  for (std::size_t k = 1; k < probs.size(); ++k) {
    if (probs[k] > probs[best]) best = static_cast<int>(k);
  }
  return best;
}

Prediction predict(const MlpParams& p, const Eigen::VectorXd& x) {
  const ForwardResult f = forward(p, x);
  Prediction out;
  out.probs = f.probs.col(0).head<3>();
  out.label = argmax(std::span<const double>(f.probs.data(), static_cast<std::size_t>(f.probs.rows())));
  return out;
}

BatchPrediction predict_all(const MlpParams& p, const Eigen::MatrixXd& x) {
  BatchPrediction out;
  out.probs = forward(p, x).probs;
  out.labels.resize(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    out.labels[static_cast<std::size_t>(j)] =
        argmax(std::span<const double>(out.probs.col(j).data(), static_cast<std::size_t>(out.probs.rows())));
  }
  return out;
}

double accuracy(const MlpParams& p, const Dataset& d) {
  if (d.size() == 0) return 0.0;
  const BatchPrediction pred = predict_all(p, d.x);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < d.size(); ++i) correct += pred.labels[i] == d.y[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(d.size());
}

std::pair<MlpParams, TrainReport> train(MlpParams p, const Dataset& train_set, const Dataset& val_set,
                                        const TrainConfig& cfg) {
  if (train_set.size() == 0 || val_set.size() == 0) throw std::invalid_argument("train: empty training or validation split");
  if (train_set.input_dim() != p.input_dim() || val_set.input_dim() != p.input_dim()) {
    throw std::invalid_argument("train: dataset dimension does not match network input");
  }
  if (!(cfg.learning_rate >= 0.0) || cfg.batch_size <= 0 || cfg.epochs <= 0 || cfg.l2 < 0.0) {
    throw std::invalid_argument("train: invalid configuration");
  }
  if (cfg.early_stop_patience && *cfg.early_stop_patience <= 0) {
    throw std::invalid_argument("train: early_stop_patience must be positive");
  }

  const std::size_t n = train_set.size();
  std::vector<std::size_t> order(n);
  TrainReport report;
  double best_val = -1.0;
  int stale_epochs = 0;

  Eigen::MatrixXd xb;
  std::vector<int> yb;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng::derive(cfg.seed, static_cast<std::uint64_t>(epoch)).shuffle(std::span<std::size_t>(order));

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t count = std::min(static_cast<std::size_t>(cfg.batch_size), n - start);
      xb.resize(train_set.x.rows(), static_cast<Eigen::Index>(count));
      yb.resize(count);
      for (std::size_t k = 0; k < count; ++k) {
        xb.col(static_cast<Eigen::Index>(k)) = train_set.x.col(static_cast<Eigen::Index>(order[start + k]));
        yb[k] = train_set.y[order[start + k]];
      }
      LossAndGrads lg = loss_and_grads(p, xb, yb, cfg.l2);
      if (!std::isfinite(lg.loss)) {
        throw TrainingDivergedError("training diverged: non-finite loss at epoch " + std::to_string(epoch));
      }
      loss_sum += lg.loss * static_cast<double>(count);
      p.w1 -= cfg.learning_rate * lg.grads.w1;
      p.b1 -= cfg.learning_rate * lg.grads.b1;
      p.w2 -= cfg.learning_rate * lg.grads.w2;
      p.b2 -= cfg.learning_rate * lg.grads.b2;
    }

    EpochRecord rec{epoch, loss_sum / static_cast<double>(n), accuracy(p, train_set), accuracy(p, val_set)};
    report.epochs.push_back(rec);

    if (cfg.early_stop_patience) {
      if (rec.val_accuracy > best_val) {
        best_val = rec.val_accuracy;
        stale_epochs = 0;
      } else if (++stale_epochs >= *cfg.early_stop_patience) {
        break;
      }
    }
  }
  if (!p.valid()) throw TrainingDivergedError("training diverged: parameters are no longer finite");
  return {std::move(p), std::move(report)};
}

void write_train_report(const TrainReport& report, const std::filesystem::path& path) {
  auto out = csv::open(path);
  out << "epoch,train_loss,train_acc,val_acc\n";
  for (const auto& r : report.epochs) {
    out << r.epoch << ',' << csv::num(r.train_loss) << ',' << csv::num(r.train_accuracy) << ','
        << csv::num(r.val_accuracy) << '\n';
  }
  csv::close(out, path);
}

}  // namespace wmlp::nn
