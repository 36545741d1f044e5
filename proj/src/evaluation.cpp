#include "wmlp/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "wmlp/csv.hpp"

namespace wmlp::eval {

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts) t = std::accumulate(row.begin(), row.end(), t);
  return t;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (int k = 0; k < kClasses; ++k) t += counts[k][k];
  return t;
}

namespace {

void check_label(int label) {
  if (label < 0 || label >= kClasses) throw std::invalid_argument("label out of range: " + std::to_string(label));
}

double ratio(std::uint64_t num, std::uint64_t den, bool& undefined) {
  if (den == 0) {
    undefined = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("confusion_matrix: label sequences differ in length");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    check_label(truth[i]);
    check_label(predicted[i]);
    ++cm.counts[truth[i]][predicted[i]];
  }
  return cm;
}

BinaryCounts binary_reduce(const ConfusionMatrix& cm, int cls) {
  if (cls < 0 || cls >= kClasses) throw std::invalid_argument("binary_reduce: invalid class " + std::to_string(cls));
  BinaryCounts b;
  std::uint64_t row = 0;
  std::uint64_t col = 0;
  for (int k = 0; k < kClasses; ++k) {
    row += cm.counts[cls][k];
    col += cm.counts[k][cls];
  }
  b.tp = cm.counts[cls][cls];
  b.fn = row - b.tp;
  b.fp = col - b.tp;
  b.tn = cm.total() - b.tp - b.fn - b.fp;
  return b;
}

ClassMetrics binary_metrics(const BinaryCounts& b) {
  ClassMetrics m;
  bool unused = false;
  m.accuracy = ratio(b.tp + b.tn, b.tp + b.tn + b.fp + b.fn, unused);
  m.precision = ratio(b.tp, b.tp + b.fp, m.undefined);
  m.recall = ratio(b.tp, b.tp + b.fn, m.undefined);
  const double pr = m.precision + m.recall;
  if (pr > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / pr;
  } else {
    m.f1 = 0.0;
    m.undefined = true;
  }
  return m;
}

MetricsReport classification_metrics(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) throw std::invalid_argument("classification_metrics: empty confusion matrix");
  MetricsReport r;
  for (int k = 0; k < kClasses; ++k) {
    r.per_class[k] = binary_metrics(binary_reduce(cm, k));
    r.macro_precision += r.per_class[k].precision / kClasses;
    r.macro_recall += r.per_class[k].recall / kClasses;
    r.macro_f1 += r.per_class[k].f1 / kClasses;
    r.any_undefined = r.any_undefined || r.per_class[k].undefined;
  }
  r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  return r;
}

RocCurve roc_curve(std::span<const int> truth, std::span<const double> scores, int positive_class) {
  if (truth.size() != scores.size()) throw std::invalid_argument("roc_curve: labels and scores differ in length");
  check_label(positive_class);
  std::uint64_t positives = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    check_label(truth[i]);
    if (!std::isfinite(scores[i])) throw std::invalid_argument("roc_curve: non-finite score");
    positives += truth[i] == positive_class ? 1 : 0;
  }
  const std::uint64_t negatives = truth.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("roc_curve: class " + std::to_string(positive_class) + " needs positive and negative samples");
  }

  std::vector<std::size_t> order(truth.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve{{0.0, 0.0}};
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double threshold = scores[order[k]];
    for (; k < order.size() && scores[order[k]] == threshold; ++k) {
      if (truth[order[k]] == positive_class) {
        ++tp;
      } else {
        ++fp;
      }
    }
    curve.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                     static_cast<double>(tp) / static_cast<double>(positives)});
  }
  // The last group always lands on (1, 1); append only if rounding kept it off.
  if (!(curve.back() == RocPoint{1.0, 1.0})) curve.push_back({1.0, 1.0});
  return curve;
}

double auc(const RocCurve& curve) {
  double area = 0.0;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    area += (curve[k].fpr - curve[k - 1].fpr) * (curve[k].tpr + curve[k - 1].tpr) / 2.0;
  }
  return area;
}

void attach_auc(MetricsReport& report, const std::array<RocCurve, kClasses>& curves) {
  report.macro_auc = 0.0;
  for (int k = 0; k < kClasses; ++k) {
    report.per_class[k].auc = auc(curves[k]);
    report.macro_auc += report.per_class[k].auc / kClasses;
  }
}

void export_report(const MetricsReport& report, const ConfusionMatrix& cm, const std::array<RocCurve, kClasses>& curves,
                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    const auto path = dir / "metrics.csv";
    auto out = csv::open(path);
    out << "scope,accuracy,precision,recall,f1,auc,undefined\n";
    double macro_accuracy = 0.0;
    for (int k = 0; k < kClasses; ++k) {
      const ClassMetrics& m = report.per_class[k];
      macro_accuracy += m.accuracy / kClasses;
      out << "class" << k << ',' << csv::num(m.accuracy) << ',' << csv::num(m.precision) << ',' << csv::num(m.recall)
          << ',' << csv::num(m.f1) << ',' << csv::num(m.auc) << ',' << (m.undefined ? 1 : 0) << '\n';
    }
    out << "macro," << csv::num(macro_accuracy) << ',' << csv::num(report.macro_precision) << ','
        << csv::num(report.macro_recall) << ',' << csv::num(report.macro_f1) << ',' << csv::num(report.macro_auc) << ','
        << (report.any_undefined ? 1 : 0) << '\n';
    // Single-label multi-class: micro precision, recall and F1 all equal trace / total.
    out << "overall," << csv::num(report.accuracy) << ',' << csv::num(report.accuracy) << ','
        << csv::num(report.accuracy) << ',' << csv::num(report.accuracy) << ',' << csv::num(report.macro_auc) << ",0\n";
    csv::close(out, path);
  }
  {
    const auto path = dir / "confusion.csv";
    auto out = csv::open(path);
    out << "true,pred0,pred1,pred2\n";
    for (int t = 0; t < kClasses; ++t) {
      out << t;
      for (int p = 0; p < kClasses; ++p) out << ',' << cm.counts[t][p];
      out << '\n';
    }
    csv::close(out, path);
  }
  for (int k = 0; k < kClasses; ++k) {
    const auto path = dir / ("roc_class" + std::to_string(k) + ".csv");
    auto out = csv::open(path);
    out << "fpr,tpr\n";
    for (const RocPoint& p : curves[k]) out << csv::num(p.fpr) << ',' << csv::num(p.tpr) << '\n';
    csv::close(out, path);
  }
}

}  // namespace wmlp::eval
