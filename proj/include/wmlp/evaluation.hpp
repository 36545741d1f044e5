#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace wmlp::eval {

inline constexpr int kClasses = 3;

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kClasses>, kClasses> counts{};

  std::uint64_t total() const;
  std::uint64_t trace() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// One-vs-rest counts for a single class.
struct BinaryCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  friend bool operator==(const BinaryCounts&, const BinaryCounts&) = default;
};

struct ClassMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  /// Set when precision, recall or f1 had a zero denominator and was reported as 0.
  bool undefined = false;
};

struct MetricsReport {
  std::array<ClassMetrics, kClasses> per_class{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double macro_auc = 0.0;
  double accuracy = 0.0;  // trace / total
  bool any_undefined = false;
};

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted);

BinaryCounts binary_reduce(const ConfusionMatrix& cm, int cls);

/// Accuracy, precision, recall and F1 per class plus macro averages. AUC fields are left at 0.
MetricsReport classification_metrics(const ConfusionMatrix& cm);

/// Metrics of a single one-vs-rest reduction.
ClassMetrics binary_metrics(const BinaryCounts& b);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;

  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

using RocCurve = std::vector<RocPoint>;

/// One-vs-rest ROC for `positive_class`; tied scores form a single step.
RocCurve roc_curve(std::span<const int> truth, std::span<const double> scores, int positive_class);

/// Trapezoidal area under the curve.
double auc(const RocCurve& curve);

/// Copies per-class AUCs into the report and refreshes the macro AUC.
void attach_auc(MetricsReport& report, const std::array<RocCurve, kClasses>& curves);

/// Writes metrics.csv, confusion.csv and roc_class{0,1,2}.csv into `dir`.
void export_report(const MetricsReport& report, const ConfusionMatrix& cm, const std::array<RocCurve, kClasses>& curves,
                   const std::filesystem::path& dir);

}  // namespace wmlp::eval
