#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sentikit {

enum class Sentiment : std::uint8_t { Negative = 0, Positive = 1, Neutral = 2 };

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<Sentiment, kNumClasses> kAllSentiments = {
    Sentiment::Negative, Sentiment::Positive, Sentiment::Neutral};

using ClassCounts = std::array<std::size_t, kNumClasses>;

constexpr std::size_t index_of(Sentiment s) { return static_cast<std::size_t>(s); }
const char *to_string(Sentiment s);
// Accepts English and Indonesian class names in any letter case.
std::optional<Sentiment> parse_sentiment(std::string_view label);

struct Review {
  std::string text;
  Sentiment label;
};

// Immutable once built; counts are always derived from the records.
class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  explicit LabeledCorpus(std::vector<Review> records);

  const std::vector<Review> &records() const { return records_; }
  const Review &operator[](std::size_t i) const { return records_[i]; }
  const ClassCounts &counts() const { return counts_; }
  std::size_t count(Sentiment s) const { return counts_[index_of(s)]; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  LabeledCorpus subset(std::span<const std::size_t> indices) const;
  std::vector<Sentiment> labels() const;

 private:
  std::vector<Review> records_;
  ClassCounts counts_{};
};

struct CsvOptions {
  char delimiter = ';';
  std::string text_col = "review";
  std::string label_col = "sentiment";
  // Skip rows whose review text is empty instead of failing.
  bool skip_empty = false;
};

struct LoadStats {
  std::size_t rows = 0;
  std::size_t skipped_empty = 0;
};

// RFC-4180 quoting with a configurable delimiter.
std::vector<std::vector<std::string>> parse_delimited(std::string_view content,
                                                      char delimiter);

LabeledCorpus load_csv(const std::filesystem::path &path, const CsvOptions &options = {},
                       LoadStats *stats = nullptr);
LabeledCorpus parse_csv(std::string_view content, const CsvOptions &options = {},
                        LoadStats *stats = nullptr);

struct ClassShare {
  std::size_t count = 0;
  double percent = 0.0;
};

std::array<ClassShare, kNumClasses> class_distribution(const LabeledCorpus &corpus);
double round_to(double value, int decimals);

struct SplitSpec {
  double train_ratio = 0.8;
  std::uint64_t seed = 42;
  std::size_t k = 5;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Per-class test quota by largest remainder on (1 - ratio) * count, ties to the
// lower class index. Quotas are computed in exact integer arithmetic.
ClassCounts test_quota(const ClassCounts &counts, double train_ratio);

SplitIndices stratified_split_indices(const LabeledCorpus &corpus, const SplitSpec &spec);
std::pair<LabeledCorpus, LabeledCorpus> stratified_split(const LabeledCorpus &corpus,
                                                         const SplitSpec &spec);

// Fold f holds validation indices; training indices are the complement.
std::vector<SplitIndices> stratified_kfold(const LabeledCorpus &corpus, const SplitSpec &spec);

}  // namespace sentikit
