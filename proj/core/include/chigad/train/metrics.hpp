// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace chigad::train {

struct MetricsRecord {
  double auroc = 0.0;
  double auprc = 0.0;
  double f1_macro = 0.0;
  double recall = 0.0;
};

/// Mann-Whitney U / (n_pos n_neg) with midranks for ties.
/// Throws unless both classes are present.
double auroc(std::span<const double> scores, std::span<const int> labels);

/// Average precision: sum over distinct score thresholds (descending) of
/// precision * (recall increment). No interpolation.
double auprc(std::span<const double> scores, std::span<const int> labels);

/// Predict anomalous when score >= threshold. F1 of a class with no
/// predicted and no actual members counts as 0.
double f1_macro(std::span<const double> scores, std::span<const int> labels, double threshold = 0.5);
/// Recall of the anomalous class.
double recall(std::span<const double> scores, std::span<const int> labels, double threshold = 0.5);

MetricsRecord compute_metrics(std::span<const double> scores, std::span<const int> labels, double threshold = 0.5);

struct CurvePoint {
  double threshold = 0.0;
  double x = 0.0;  // FPR for ROC, recall for PR
  double y = 0.0;  // TPR for ROC, precision for PR
};

/// One point per distinct score (descending), starting at (0, 0).
std::vector<CurvePoint> roc_curve(std::span<const double> scores, std::span<const int> labels);
/// One point per distinct score (descending).
std::vector<CurvePoint> pr_curve(std::span<const double> scores, std::span<const int> labels);

}  // namespace chigad::train
