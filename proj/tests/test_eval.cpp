#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "error.hpp"
#include "eval.hpp"
#include "rng.hpp"

using namespace sentikit;

namespace {

MetricSet from_pairs(const std::vector<std::size_t> &t, const std::vector<std::size_t> &p) {
  return metrics(confusion(t, p));
}

MetricSet with(double acc, double f1) {
  MetricSet m;
  m.total = 100;
  m.accuracy = acc;
  m.weighted_f1 = f1;
  return m;
}

struct Brute {
  double accuracy, wp, wr, wf;
};

// Naive per-sample loops over the raw label lists.
Brute brute_force(const std::vector<std::size_t> &t, const std::vector<std::size_t> &p) {
  const std::size_t n = t.size();
  double correct = 0;
  for (std::size_t i = 0; i < n; ++i) correct += t[i] == p[i] ? 1 : 0;
  Brute b{correct / n, 0, 0, 0};
  for (std::size_t c = 0; c < 3; ++c) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] == c && t[i] == c) tp += 1;
      if (p[i] == c && t[i] != c) fp += 1;
      if (p[i] != c && t[i] == c) fn += 1;
    }
    const double support = tp + fn;
    const double prec = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    const double rec = support > 0 ? tp / support : 0.0;
    const double f1 = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
    b.wp += support * prec / n;
    b.wr += support * rec / n;
    b.wf += support * f1 / n;
  }
  return b;
}

}  // namespace

TEST_CASE("confusion examples") {
  const auto cm = confusion(std::vector<std::size_t>{0, 0, 1, 2}, std::vector<std::size_t>{0, 1, 1, 1});
  const std::size_t want[3][3] = {{1, 1, 0}, {0, 1, 0}, {0, 1, 0}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(cm(i, j) == want[i][j]);
  CHECK(cm.total() == 4);
  const auto perfect = confusion(std::vector<std::size_t>{0, 1, 2, 2}, std::vector<std::size_t>{0, 1, 2, 2});
  CHECK(perfect.trace() == 4);
  try {
    confusion(std::vector<std::size_t>{0}, std::vector<std::size_t>{0, 1});
    FAIL("expected LengthMismatch");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
  try {
    confusion(std::vector<std::size_t>{}, std::vector<std::size_t>{});
    FAIL("expected Empty");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::Empty);
  }
  CHECK_THROWS_AS(confusion(std::vector<std::size_t>{3}, std::vector<std::size_t>{0}), Error);
}

TEST_CASE("confusion total equals sample count") {
  Rng rng(1);
  std::vector<std::size_t> t(1000), p(1000);
  for (auto &v : t) v = rng.below(3);
  for (auto &v : p) v = rng.below(3);
  CHECK(confusion(t, p).total() == 1000);
}

TEST_CASE("diagonal matrices score one") {
  for (std::size_t a : {1, 5}) {
    ConfusionMatrix cm(3);
    cm(0, 0) = a;
    cm(1, 1) = 2;
    cm(2, 2) = 7;
    const auto m = metrics(cm);
    CHECK(m.accuracy == 1.0);
    CHECK(m.weighted_f1 == 1.0);
    CHECK(m.weighted_precision == 1.0);
    for (const auto &c : m.per_class) {
      CHECK(c.precision == 1.0);
      CHECK(c.recall == 1.0);
      CHECK(c.f1 == 1.0);
    }
  }
}

TEST_CASE("binary hand example") {
  ConfusionMatrix cm(2);
  cm(1, 1) = 8;  // TP for class 1
  cm(0, 1) = 2;  // FP
  cm(1, 0) = 1;  // FN
  cm(0, 0) = 9;  // TN
  const auto m = metrics(cm);
  CHECK(m.per_class[1].precision == doctest::Approx(0.8));
  CHECK(m.per_class[1].recall == doctest::Approx(8.0 / 9.0));
  CHECK(m.per_class[1].f1 == doctest::Approx(0.8421052631578947));
  CHECK(m.accuracy == doctest::Approx(17.0 / 20.0));
}

TEST_CASE("absent class is flagged and carries no weight") {
  const auto m = from_pairs({0, 0, 1}, {0, 1, 1});
  CHECK(m.per_class[2].precision == 0.0);
  CHECK(m.per_class[2].recall == 0.0);
  CHECK(m.per_class[2].f1 == 0.0);
  CHECK(m.per_class[2].precision_undefined);
  CHECK(m.per_class[2].recall_undefined);
  CHECK(m.per_class[2].support == 0);
  CHECK(m.any_undefined);
  // macro averages only over the two classes that occur
  CHECK(m.macro_recall == doctest::Approx((0.5 + 1.0) / 2));
  try {
    metrics(ConfusionMatrix(3));
    FAIL("expected EmptyMatrix");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::EmptyMatrix);
  }
}

TEST_CASE("weighted recall equals accuracy exactly on random matrices") {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    ConfusionMatrix cm(3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) cm(i, j) = rng.below(50);
    if (cm.total() == 0) cm(0, 0) = 1;
    const auto m = metrics(cm);
    REQUIRE(m.weighted_recall == m.accuracy);
    for (const auto &c : m.per_class) {
      if (c.precision == 0.0 || c.recall == 0.0) {
        REQUIRE(c.f1 == 0.0);
      } else {
        REQUIRE(c.f1 > 0.0);
        REQUIRE(c.f1 >= std::min(c.precision, c.recall) - 1e-15);
        REQUIRE(c.f1 <= std::max(c.precision, c.recall) + 1e-15);
      }
      REQUIRE(c.precision >= 0.0);
      REQUIRE(c.precision <= 1.0);
    }
  }
}

TEST_CASE("weighted metrics match the brute-force oracle") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(1000);
    std::vector<std::size_t> t(n), p(n);
    for (auto &v : t) v = rng.below(3);
    for (std::size_t i = 0; i < n; ++i) p[i] = rng.below(4) ? t[i] : rng.below(3);
    const auto m = from_pairs(t, p);
    const auto b = brute_force(t, p);
    REQUIRE(std::abs(m.accuracy - b.accuracy) < 1e-12);
    REQUIRE(std::abs(m.weighted_precision - b.wp) < 1e-12);
    REQUIRE(std::abs(m.weighted_recall - b.wr) < 1e-12);
    REQUIRE(std::abs(m.weighted_f1 - b.wf) < 1e-12);
  }
}

TEST_CASE("leaderboard ordering") {
  std::vector<LeaderboardRow> rows{{"NB", with(0.4302, 0.4767), ""},
                                   {"LSTM", with(0.92, 0.91), ""},
                                   {"RF", with(0.7394, 0.6963), ""},
                                   {"LR", with(0.7740, 0.7311), ""}};
  const auto sorted = compare(rows);
  REQUIRE(sorted.size() == 4);
  CHECK(sorted[0].name == "LSTM");
  CHECK(sorted[1].name == "LR");
  CHECK(sorted[2].name == "RF");
  CHECK(sorted[3].name == "NB");

  CHECK(compare({{"only", with(0.5, 0.5), ""}})[0].name == "only");
  const auto tie = compare({{"zeta", with(0.5, 0.5), ""}, {"alpha", with(0.5, 0.5), ""}});
  CHECK(tie[0].name == "alpha");
  const auto by_acc = compare({{"a", with(0.5, 0.5), ""}, {"b", with(0.6, 0.5), ""}});
  CHECK(by_acc[0].name == "b");
  const auto failed = compare({{"broken", std::nullopt, "boom"}, {"ok", with(0.1, 0.1), ""}});
  CHECK(failed[0].name == "ok");
  CHECK(failed[1].name == "broken");
  CHECK_THROWS_AS(compare({}), Error);

  const auto csv = leaderboard_csv(sorted);
  CHECK(csv.rfind("model,", 0) == 0);
  CHECK(csv.find("LSTM") < csv.find("NB"));
  CHECK(leaderboard_text(sorted).find("LR") != std::string::npos);
}

TEST_CASE("cv aggregation") {
  const std::vector<MetricSet> folds{with(0.7, 0.6), with(0.8, 0.6)};
  const auto s = cv_aggregate(folds);
  CHECK(s.folds == 2);
  CHECK(s.accuracy.mean == doctest::Approx(0.75));
  CHECK(s.accuracy.std == doctest::Approx(0.05));
  CHECK(s.weighted_f1.mean == doctest::Approx(0.6));
  CHECK(s.weighted_f1.std == doctest::Approx(0.0));
  try {
    cv_aggregate(std::vector<MetricSet>{with(0.5, 0.5)});
    FAIL("expected TooFewFolds");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::TooFewFolds);
  }
}
