// SPDX-License-Identifier: Apache-2.0

#include "chigad/train/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "chigad/types.hpp"

namespace chigad::train {
namespace {

struct ClassCounts {
  std::size_t pos = 0;
  std::size_t neg = 0;
};

ClassCounts count_classes(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error("metrics: score and label counts differ");
  ClassCounts c;
  for (int y : labels) {
    if (y == 1) {
      ++c.pos;
    } else if (y == 0) {
      ++c.neg;
    } else {
      throw Error("metrics: labels must be 0 or 1");
    }
  }
  return c;
}

void require_both(const ClassCounts& c, const char* what) {
  if (c.pos == 0 || c.neg == 0) throw Error(std::string(what) + " undefined: labels contain a single class");
}

std::vector<std::size_t> descending_order(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

// Walks groups of tied scores from high to low, reporting cumulative TP/FP.
template <typename Fn>
void sweep(std::span<const double> scores, std::span<const int> labels, Fn&& on_group) {
  const auto order = descending_order(scores);
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t k = 0;
  while (k < order.size()) {
    const double s = scores[order[k]];
    while (k < order.size() && scores[order[k]] == s) {
      if (labels[order[k]] == 1) ++tp; else ++fp;
      ++k;
    }
    on_group(s, tp, fp);
  }
}

}  // namespace

double auroc(std::span<const double> scores, std::span<const int> labels) {
  const auto c = count_classes(scores, labels);
  require_both(c, "AUROC");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t end = k;
    while (end < order.size() && scores[order[end]] == scores[order[k]]) ++end;
    const double midrank = 0.5 * static_cast<double>(k + 1 + end);  // mean of ranks k+1..end
    for (std::size_t j = k; j < end; ++j) {
      if (labels[order[j]] == 1) rank_sum += midrank;
    }
    k = end;
  }
  const double np = static_cast<double>(c.pos);
  const double nn = static_cast<double>(c.neg);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double auprc(std::span<const double> scores, std::span<const int> labels) {
  const auto c = count_classes(scores, labels);
  require_both(c, "AUPRC");
  double area = 0.0;
  double prev_recall = 0.0;
  sweep(scores, labels, [&](double, std::size_t tp, std::size_t fp) {
    const double r = static_cast<double>(tp) / static_cast<double>(c.pos);
    const double p = static_cast<double>(tp) / static_cast<double>(tp + fp);
    area += (r - prev_recall) * p;
    prev_recall = r;
  });
  return area;
}

namespace {

struct Confusion {
  double tp = 0, fp = 0, tn = 0, fn = 0;
};

Confusion confusion(std::span<const double> scores, std::span<const int> labels, double threshold) {
  count_classes(scores, labels);
  Confusion m;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i] == 1) {
      (predicted ? m.tp : m.fn) += 1;
    } else {
      (predicted ? m.fp : m.tn) += 1;
    }
  }
  return m;
}

double f1(double tp, double fp, double fn) {
  const double denom = 2.0 * tp + fp + fn;
  return denom == 0.0 ? 0.0 : 2.0 * tp / denom;
}

}  // namespace

double f1_macro(std::span<const double> scores, std::span<const int> labels, double threshold) {
  const auto m = confusion(scores, labels, threshold);
  return 0.5 * (f1(m.tp, m.fp, m.fn) + f1(m.tn, m.fn, m.fp));
}

double recall(std::span<const double> scores, std::span<const int> labels, double threshold) {
  const auto m = confusion(scores, labels, threshold);
  return (m.tp + m.fn) == 0.0 ? 0.0 : m.tp / (m.tp + m.fn);
}

MetricsRecord compute_metrics(std::span<const double> scores, std::span<const int> labels, double threshold) {
  MetricsRecord r;
  r.auroc = auroc(scores, labels);
  r.auprc = auprc(scores, labels);
  r.f1_macro = f1_macro(scores, labels, threshold);
  r.recall = recall(scores, labels, threshold);
  return r;
}

std::vector<CurvePoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
  const auto c = count_classes(scores, labels);
  require_both(c, "ROC curve");
  std::vector<CurvePoint> out;
  out.push_back({scores.empty() ? 0.0 : *std::max_element(scores.begin(), scores.end()) + 1.0, 0.0, 0.0});
  sweep(scores, labels, [&](double s, std::size_t tp, std::size_t fp) {
    out.push_back({s, static_cast<double>(fp) / static_cast<double>(c.neg),
                   static_cast<double>(tp) / static_cast<double>(c.pos)});
  });
  return out;
}

std::vector<CurvePoint> pr_curve(std::span<const double> scores, std::span<const int> labels) {
  const auto c = count_classes(scores, labels);
  require_both(c, "PR curve");
  std::vector<CurvePoint> out;
  sweep(scores, labels, [&](double s, std::size_t tp, std::size_t fp) {
    out.push_back({s, static_cast<double>(tp) / static_cast<double>(c.pos),
                   static_cast<double>(tp) / static_cast<double>(tp + fp)});
  });
  return out;
}

}  // namespace chigad::train
