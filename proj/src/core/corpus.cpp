#include "corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "rng.hpp"
#include "utf8.hpp"

namespace sentikit {

const char *to_string(Sentiment s) {
  switch (s) {
    case Sentiment::Negative: return "negative";
    case Sentiment::Positive: return "positive";
    case Sentiment::Neutral: return "neutral";
  }
  return "unknown";
}

std::optional<Sentiment> parse_sentiment(std::string_view label) {
  std::string lower;
  lower.reserve(label.size());
  for (char c : label) {
    if (c == ' ' || c == '\t' || c == '\r') continue;
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "negative" || lower == "negatif") return Sentiment::Negative;
  if (lower == "positive" || lower == "positif") return Sentiment::Positive;
  if (lower == "neutral" || lower == "netral") return Sentiment::Neutral;
  return std::nullopt;
}

LabeledCorpus::LabeledCorpus(std::vector<Review> records) : records_(std::move(records)) {
  for (const auto &r : records_) ++counts_[index_of(r.label)];
}

LabeledCorpus LabeledCorpus::subset(std::span<const std::size_t> indices) const {
  std::vector<Review> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(records_.at(i));
  return LabeledCorpus(std::move(out));
}

std::vector<Sentiment> LabeledCorpus::labels() const {
  std::vector<Sentiment> out;
  out.reserve(records_.size());
  for (const auto &r : records_) out.push_back(r.label);
  return out;
}

std::vector<std::vector<std::string>> parse_delimited(std::string_view content,
                                                      char delimiter) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;
  const std::size_t n = content.size();

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    // a bare empty line is not a record
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };

  while (i < n) {
    char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && content[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      field.push_back(c);
      ++i;
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
      ++i;
    } else if (c == delimiter) {
      end_field();
      ++i;
    } else if (c == '\r' && i + 1 < n && content[i + 1] == '\n') {
      end_row();
      i += 2;
    } else if (c == '\n' || c == '\r') {
      end_row();
      ++i;
    } else {
      field.push_back(c);
      field_started = true;
      ++i;
    }
  }
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

std::size_t find_column(const std::vector<std::string> &header, const std::string &name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  throw Error(ErrorCode::MissingColumn, "missing column '" + name + "' in header");
}

bool is_blank(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (!utf8::is_space(utf8::decode(s, pos))) return false;
  }
  return true;
}

}  // namespace

LabeledCorpus parse_csv(std::string_view content, const CsvOptions &options,
                        LoadStats *stats) {
  if (!utf8::is_valid(content)) throw Error(ErrorCode::BadEncoding, "input is not valid UTF-8");
  if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);

  auto rows = parse_delimited(content, options.delimiter);
  if (rows.empty()) throw Error(ErrorCode::EmptyCorpus, "no header row");
  const std::size_t text_idx = find_column(rows[0], options.text_col);
  const std::size_t label_idx = find_column(rows[0], options.label_col);

  LoadStats local;
  std::vector<Review> records;
  records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::size_t data_row = r - 1;
    const auto &row = rows[r];
    ++local.rows;
    if (row.size() <= std::max(text_idx, label_idx)) {
      throw RowError(ErrorCode::MissingColumn, data_row,
                     "data row " + std::to_string(data_row) + ": expected at least " +
                         std::to_string(std::max(text_idx, label_idx) + 1) + " fields, got " +
                         std::to_string(row.size()));
    }
    auto label = parse_sentiment(row[label_idx]);
    if (!label) {
      throw RowError(ErrorCode::UnknownLabel, data_row,
                     "data row " + std::to_string(data_row) + ": unknown label '" +
                         row[label_idx] + "'");
    }
    if (is_blank(row[text_idx])) {
      if (options.skip_empty) {
        ++local.skipped_empty;
        continue;
      }
      throw RowError(ErrorCode::EmptyText, data_row,
                     "data row " + std::to_string(data_row) + ": empty review text");
    }
    records.push_back(Review{row[text_idx], *label});
  }
  if (records.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no data rows");
  if (stats) *stats = local;
  return LabeledCorpus(std::move(records));
}

LabeledCorpus load_csv(const std::filesystem::path &path, const CsvOptions &options,
                       LoadStats *stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open dataset '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options, stats);
}

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

std::array<ClassShare, kNumClasses> class_distribution(const LabeledCorpus &corpus) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "class_distribution of empty corpus");
  std::array<ClassShare, kNumClasses> out{};
  const auto n = static_cast<double>(corpus.size());
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    out[c].count = corpus.counts()[c];
    out[c].percent = 100.0 * static_cast<double>(out[c].count) / n;
  }
  return out;
}

namespace {

constexpr std::int64_t kRatioScale = 1'000'000'000;

void check_ratio(double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "train_ratio must lie in (0, 1]");
}

std::array<std::vector<std::size_t>, kNumClasses> shuffled_by_class(const LabeledCorpus &corpus,
                                                                    std::uint64_t seed) {
  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    by_class[index_of(corpus[i].label)].push_back(i);
  Rng rng(seed);
  for (auto &members : by_class) rng.shuffle(members);
  return by_class;
}

}  // namespace

ClassCounts test_quota(const ClassCounts &counts, double train_ratio) {
  check_ratio(train_ratio);
  const auto test_num = static_cast<std::int64_t>(std::llround((1.0 - train_ratio) * kRatioScale));
  ClassCounts quota{};
  std::array<std::int64_t, kNumClasses> remainder{};
  std::int64_t total_scaled = 0;
  std::int64_t floors = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const std::int64_t scaled = static_cast<std::int64_t>(counts[c]) * test_num;
    quota[c] = static_cast<std::size_t>(scaled / kRatioScale);
    remainder[c] = scaled % kRatioScale;
    total_scaled += scaled;
    floors += static_cast<std::int64_t>(quota[c]);
  }
  // seats = round(sum of quotas), half rounds up
  const std::int64_t seats = (total_scaled + kRatioScale / 2) / kRatioScale;
  std::array<std::size_t, kNumClasses> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::int64_t extra = seats - floors, k = 0; extra > 0; --extra, ++k) {
    ++quota[order[static_cast<std::size_t>(k)]];
  }
  return quota;
}

SplitIndices stratified_split_indices(const LabeledCorpus &corpus, const SplitSpec &spec) {
  check_ratio(spec.train_ratio);
  for (Sentiment s : kAllSentiments) {
    if (corpus.count(s) == 0)
      throw Error(ErrorCode::EmptyClass,
                  std::string("class '") + to_string(s) + "' has no records");
  }
  const ClassCounts quota = test_quota(corpus.counts(), spec.train_ratio);
  auto by_class = shuffled_by_class(corpus, spec.seed);

  SplitIndices out;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto &members = by_class[c];
    out.test.insert(out.test.end(), members.begin(),
                    members.begin() + static_cast<std::ptrdiff_t>(quota[c]));
    out.train.insert(out.train.end(),
                     members.begin() + static_cast<std::ptrdiff_t>(quota[c]), members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<LabeledCorpus, LabeledCorpus> stratified_split(const LabeledCorpus &corpus,
                                                         const SplitSpec &spec) {
  auto idx = stratified_split_indices(corpus, spec);
  return {corpus.subset(idx.train), corpus.subset(idx.test)};
}

std::vector<SplitIndices> stratified_kfold(const LabeledCorpus &corpus, const SplitSpec &spec) {
  const std::size_t k = spec.k;
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k-fold needs k >= 2");
  // classes absent from the corpus do not constrain k
  std::size_t min_count = corpus.size();
  for (std::size_t c : corpus.counts()) {
    if (c > 0) min_count = std::min(min_count, c);
  }
  if (k > min_count) {
    throw Error(ErrorCode::FoldTooLarge, "k=" + std::to_string(k) +
                                             " exceeds the smallest class count " +
                                             std::to_string(min_count));
  }
  auto by_class = shuffled_by_class(corpus, spec.seed);

  // Each class deals floor(count/k) to every fold; its leftover records go to
  // consecutive folds continuing where the previous class stopped, so fold
  // totals also differ by at most one.
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t cursor = 0;
  for (const auto &members : by_class) {
    const std::size_t base = members.size() / k;
    const std::size_t extra = members.size() % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
      for (std::size_t j = 0; j < base; ++j) folds[f].push_back(members[pos++]);
    }
    for (std::size_t e = 0; e < extra; ++e) {
      folds[(cursor + e) % k].push_back(members[pos++]);
    }
    cursor = (cursor + extra) % k;
  }

  std::vector<SplitIndices> out(k);
  std::vector<std::size_t> fold_of(corpus.size());
  for (std::size_t f = 0; f < k; ++f) {
    for (std::size_t i : folds[f]) fold_of[i] = f;
  }
  for (std::size_t f = 0; f < k; ++f) {
    out[f].test = std::move(folds[f]);
    std::sort(out[f].test.begin(), out[f].test.end());
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      if (fold_of[i] != f) out[f].train.push_back(i);
    }
  }
  return out;
}

}  // namespace sentikit
