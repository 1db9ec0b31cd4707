#include "eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "error.hpp"

namespace sentikit {

ConfusionMatrix::ConfusionMatrix(std::size_t classes) : classes_(classes), m_(classes * classes, 0) {
  if (classes < 1) throw Error(ErrorCode::InvalidArgument, "confusion matrix needs >= 1 class");
}

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (auto v : m_) n += v;
  return n;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < classes_; ++i) n += (*this)(i, i);
  return n;
}

std::string ConfusionMatrix::to_csv(std::span<const std::string> names) const {
  auto name = [&](std::size_t i) { return i < names.size() ? names[i] : std::to_string(i); };
  std::string out = "true\\pred";
  for (std::size_t j = 0; j < classes_; ++j) out += "," + name(j);
  out += "\n";
  for (std::size_t i = 0; i < classes_; ++i) {
    out += name(i);
    for (std::size_t j = 0; j < classes_; ++j) out += "," + std::to_string((*this)(i, j));
    out += "\n";
  }
  return out;
}

ConfusionMatrix confusion(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred,
                          std::size_t classes) {
  if (y_true.size() != y_pred.size())
    throw Error(ErrorCode::LengthMismatch, "y_true and y_pred differ in length");
  if (y_true.empty()) throw Error(ErrorCode::Empty, "no labels to tally");
  ConfusionMatrix cm(classes);
  for (std::size_t k = 0; k < y_true.size(); ++k) {
    if (y_true[k] >= classes || y_pred[k] >= classes)
      throw Error(ErrorCode::InvalidArgument, "label outside the class range");
    ++cm(y_true[k], y_pred[k]);
  }
  return cm;
}

MetricSet metrics(const ConfusionMatrix &cm) {
  const std::size_t C = cm.classes();
  const std::size_t n = cm.total();
  if (n == 0) throw Error(ErrorCode::EmptyMatrix, "confusion matrix is empty");

  MetricSet ms;
  ms.total = n;
  ms.per_class.resize(C);
  const double dn = static_cast<double>(n);
  ms.accuracy = static_cast<double>(cm.trace()) / dn;
  std::size_t active = 0;
  for (std::size_t c = 0; c < C; ++c) {
    ClassMetrics &k = ms.per_class[c];
    const std::size_t tp = cm(c, c);
    for (std::size_t j = 0; j < C; ++j) {
      k.support += cm(c, j);
      k.predicted += cm(j, c);
    }
    if (k.predicted > 0)
      k.precision = static_cast<double>(tp) / static_cast<double>(k.predicted);
    else
      k.precision_undefined = true;
    if (k.support > 0)
      k.recall = static_cast<double>(tp) / static_cast<double>(k.support);
    else
      k.recall_undefined = true;
    if (k.precision + k.recall > 0.0)
      k.f1 = 2.0 * k.precision * k.recall / (k.precision + k.recall);
    else
      k.f1_undefined = true;
    ms.any_undefined = ms.any_undefined || k.precision_undefined || k.recall_undefined || k.f1_undefined;

    const double w = static_cast<double>(k.support);
    ms.weighted_precision += w * k.precision;
    ms.weighted_f1 += w * k.f1;
    if (k.support > 0 || k.predicted > 0) {
      ++active;
      ms.macro_precision += k.precision;
      ms.macro_recall += k.recall;
      ms.macro_f1 += k.f1;
    }
  }
  ms.weighted_precision /= dn;
  ms.weighted_f1 /= dn;
  // sum_c support_c * (tp_c / support_c) / n collapses to trace / n
  ms.weighted_recall = static_cast<double>(cm.trace()) / dn;
  ms.macro_precision /= static_cast<double>(active);
  ms.macro_recall /= static_cast<double>(active);
  ms.macro_f1 /= static_cast<double>(active);
  return ms;
}

std::vector<LeaderboardRow> compare(std::vector<LeaderboardRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::Empty, "no leaderboard rows");
  std::stable_sort(rows.begin(), rows.end(), [](const LeaderboardRow &a, const LeaderboardRow &b) {
    if (a.metrics.has_value() != b.metrics.has_value()) return a.metrics.has_value();
    if (a.metrics && b.metrics) {
      if (a.metrics->weighted_f1 != b.metrics->weighted_f1) return a.metrics->weighted_f1 > b.metrics->weighted_f1;
      if (a.metrics->accuracy != b.metrics->accuracy) return a.metrics->accuracy > b.metrics->accuracy;
    }
    return a.name < b.name;
  });
  return rows;
}

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string leaderboard_text(std::span<const LeaderboardRow> rows) {
  std::size_t width = 5;
  for (const auto &r : rows) width = std::max(width, r.name.size());
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-*s  %8s  %9s  %8s  %8s\n", static_cast<int>(width), "Model", "Accuracy",
                "Precision", "Recall", "F1-score");
  out += buf;
  out += std::string(width + 2 + 8 + 2 + 9 + 2 + 8 + 2 + 8, '-') + "\n";
  for (const auto &r : rows) {
    if (r.metrics) {
      const auto &m = *r.metrics;
      std::snprintf(buf, sizeof buf, "%-*s  %8.4f  %9.4f  %8.4f  %8.4f\n", static_cast<int>(width), r.name.c_str(),
                    m.accuracy, m.weighted_precision, m.weighted_recall, m.weighted_f1);
    } else {
      std::snprintf(buf, sizeof buf, "%-*s  failed: %s\n", static_cast<int>(width), r.name.c_str(), r.error.c_str());
    }
    out += buf;
  }
  return out;
}

std::string leaderboard_csv(std::span<const LeaderboardRow> rows) {
  std::string out = "model,accuracy,precision,recall,f1,macro_f1,status\n";
  for (const auto &r : rows) {
    out += r.name;
    if (r.metrics) {
      const auto &m = *r.metrics;
      out += "," + fixed4(m.accuracy) + "," + fixed4(m.weighted_precision) + "," + fixed4(m.weighted_recall) + "," +
             fixed4(m.weighted_f1) + "," + fixed4(m.macro_f1) + ",ok\n";
    } else {
      out += ",,,,,,failed\n";
    }
  }
  return out;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd r;
  if (values.empty()) return r;
  for (double v : values) r.mean += v;
  r.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - r.mean) * (v - r.mean);
  r.std = std::sqrt(ss / static_cast<double>(values.size()));
  return r;
}

CvSummary cv_aggregate(std::span<const MetricSet> per_fold) {
  if (per_fold.size() < 2) throw Error(ErrorCode::TooFewFolds, "cross-validation summary needs >= 2 folds");
  auto collect = [&](auto field) {
    std::vector<double> v;
    for (const auto &m : per_fold) v.push_back(m.*field);
    return mean_std(v);
  };
  CvSummary s;
  s.folds = per_fold.size();
  s.accuracy = collect(&MetricSet::accuracy);
  s.weighted_precision = collect(&MetricSet::weighted_precision);
  s.weighted_recall = collect(&MetricSet::weighted_recall);
  s.weighted_f1 = collect(&MetricSet::weighted_f1);
  s.macro_f1 = collect(&MetricSet::macro_f1);
  return s;
}

}  // namespace sentikit
