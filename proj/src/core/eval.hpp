#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sentikit {

class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes);

  std::size_t classes() const { return classes_; }
  // m(i, j): true class i predicted as j
  std::size_t &operator()(std::size_t i, std::size_t j) { return m_[i * classes_ + j]; }
  std::size_t operator()(std::size_t i, std::size_t j) const { return m_[i * classes_ + j]; }
  std::size_t total() const;
  std::size_t trace() const;

  std::string to_csv(std::span<const std::string> names) const;

 private:
  std::size_t classes_;
  std::vector<std::size_t> m_;
};

ConfusionMatrix confusion(std::span<const std::size_t> y_true, std::span<const std::size_t> y_pred,
                          std::size_t classes = 3);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // true instances
  std::size_t predicted = 0;  // predicted instances
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

struct MetricSet {
  std::size_t total = 0;
  double accuracy = 0.0;
  std::vector<ClassMetrics> per_class;
  double weighted_precision = 0.0;
  double weighted_recall = 0.0;
  double weighted_f1 = 0.0;
  // over classes that occur in the truth or the predictions
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  bool any_undefined = false;
};

// One-vs-rest per class; zero denominators yield 0 with the matching flag.
// Weighted averages are support-weighted; weighted recall is computed as
// trace / total, which is the same quantity as accuracy.
MetricSet metrics(const ConfusionMatrix &cm);

struct LeaderboardRow {
  std::string name;
  std::optional<MetricSet> metrics;  // empty for a failed model
  std::string error;
};

// Descending weighted F1, then accuracy, then ascending name; failed rows last
// in name order.
std::vector<LeaderboardRow> compare(std::vector<LeaderboardRow> rows);
std::string leaderboard_text(std::span<const LeaderboardRow> rows);
std::string leaderboard_csv(std::span<const LeaderboardRow> rows);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct CvSummary {
  std::size_t folds = 0;
  MeanStd accuracy;
  MeanStd weighted_precision;
  MeanStd weighted_recall;
  MeanStd weighted_f1;
  MeanStd macro_f1;
};

CvSummary cv_aggregate(std::span<const MetricSet> per_fold);
MeanStd mean_std(std::span<const double> values);

}  // namespace sentikit
