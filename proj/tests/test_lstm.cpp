#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "error.hpp"
#include "lstm.hpp"
#include "rng.hpp"

using namespace sentikit;

namespace {

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Scalar reference cell, indexed straight from the documented layout.
std::vector<double> reference_forward(const std::vector<TokenId> &ids, std::size_t true_len, const LstmParams &p,
                                      const std::vector<double> &mask) {
  const auto &s = p.shape();
  const std::size_t h = s.h, d = s.d, G = 4 * h;
  std::vector<double> hv(h, 0.0), cv(h, 0.0);
  for (std::size_t t = 0; t < true_len; ++t) {
    std::vector<double> z(G);
    for (std::size_t k = 0; k < G; ++k) {
      double acc = p.b()[k];
      for (std::size_t j = 0; j < d; ++j) acc += p.E()[ids[t] * d + j] * p.W()[j * G + k];
      for (std::size_t j = 0; j < h; ++j) acc += hv[j] * p.U()[j * G + k];
      z[k] = acc;
    }
    for (std::size_t j = 0; j < h; ++j) {
      const double i = sig(z[j]), f = sig(z[h + j]), g = std::tanh(z[2 * h + j]), o = sig(z[3 * h + j]);
      REQUIRE(i > 0.0);
      REQUIRE(i < 1.0);
      REQUIRE(f > 0.0);
      REQUIRE(f < 1.0);
      REQUIRE(o > 0.0);
      REQUIRE(o < 1.0);
      cv[j] = f * cv[j] + i * g;
      hv[j] = o * std::tanh(cv[j]);
    }
  }
  std::vector<double> logits(s.classes);
  for (std::size_t c = 0; c < s.classes; ++c) {
    double acc = p.bout()[c];
    for (std::size_t j = 0; j < h; ++j) acc += p.Wout()[c * h + j] * hv[j] * (mask.empty() ? 1.0 : mask[j]);
    logits[c] = acc;
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double z = 0;
  for (auto &l : logits) z += (l = std::exp(l - top));
  for (auto &l : logits) l /= z;
  return logits;
}

LstmParams random_params(const LstmShape &shape, std::uint64_t seed, double scale) {
  LstmParams p(shape);
  Rng rng(seed);
  for (auto &v : p.data()) v = rng.uniform(-scale, scale);
  return p;
}

PaddedSeq seq_of(std::vector<TokenId> ids, std::size_t L) {
  PaddedSeq s;
  s.true_len = ids.size();
  s.ids = std::move(ids);
  s.ids.resize(std::max(L, s.true_len), Vocabulary::kPad);
  return s;
}

}  // namespace

TEST_CASE("param_count") {
  CHECK(param_count(10000, 64, 64, 3) == 673219);
  CHECK(param_count(10262, 64, 64, 3) == 689987);
  CHECK(param_count(1, 1, 1, 1) == 15);
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const LstmShape s{1 + rng.below(300), 1 + rng.below(20), 1 + rng.below(20), 1 + rng.below(5)};
    CHECK(LstmParams(s).size() == param_count(s.vocab, s.d, s.h, s.classes));
  }
}

TEST_CASE("initialization ranges") {
  Rng rng(5);
  const LstmShape s{50, 8, 16, 3};
  const auto p = init_params(s, rng);
  const double r = 1.0 / std::sqrt(16.0);
  for (double v : p.E()) CHECK(std::abs(v) <= 0.1);
  for (double v : p.W()) CHECK(std::abs(v) <= r);
  for (double v : p.U()) CHECK(std::abs(v) <= r);
  for (double v : p.Wout()) CHECK(std::abs(v) <= r);
  for (std::size_t k = 0; k < 64; ++k) CHECK(p.b()[k] == (k >= 16 && k < 32 ? 1.0 : 0.0));
  for (double v : p.bout()) CHECK(v == 0.0);
}

TEST_CASE("zero parameters give uniform output") {
  const LstmParams p(LstmShape{10, 4, 4, 3});
  const auto probs = forward(seq_of({2, 3, 4}, 5), p, Mode::Infer);
  for (double v : probs) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("hand-stepped cell on V=5, d=h=2, L=3") {
  const LstmShape s{5, 2, 2, 3};
  const auto p = random_params(s, 9, 0.8);
  const std::vector<TokenId> ids{3, 1, 4};
  const auto got = forward(seq_of(ids, 3), p, Mode::Infer);
  const auto want = reference_forward(ids, 3, p, {});
  for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(got[c] - want[c]) < 1e-9);
}

TEST_CASE("forward matches the scalar reference on random shapes") {
  Rng rng(44);
  for (int trial = 0; trial < 40; ++trial) {
    const LstmShape s{2 + rng.below(20), 1 + rng.below(6), 1 + rng.below(6), 2 + rng.below(3)};
    const auto p = random_params(s, trial, 1.0);
    std::vector<TokenId> ids(1 + rng.below(7));
    for (auto &id : ids) id = static_cast<TokenId>(rng.below(s.vocab));
    std::vector<double> mask;
    if (trial % 2) mask = dropout_mask(s.h, 0.4, rng);
    const auto got = forward(seq_of(ids, 8), p, Mode::Train, mask);
    const auto want = reference_forward(ids, ids.size(), p, mask);
    double sum = 0;
    for (std::size_t c = 0; c < s.classes; ++c) {
      CHECK(std::abs(got[c] - want[c]) < 1e-9);
      CHECK(got[c] > 0.0);
      CHECK(got[c] < 1.0);
      sum += got[c];
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("empty sequence and bad ids") {
  const LstmParams p(LstmShape{5, 2, 2, 3});
  try {
    forward(seq_of({}, 4), p, Mode::Infer);
    FAIL("expected EmptySequence");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::EmptySequence);
  }
  CHECK_THROWS_AS(forward(seq_of({7}, 4), p, Mode::Infer), Error);
}

TEST_CASE("padding never changes the output") {
  const LstmShape s{30, 6, 6, 3};
  Rng rng(2);
  const auto p = init_params(s, rng);
  for (int i = 0; i < 100; ++i) {
    std::vector<TokenId> ids(1 + rng.below(10));
    for (auto &id : ids) id = static_cast<TokenId>(2 + rng.below(28));
    const auto base = forward(seq_of(ids, ids.size()), p, Mode::Infer);
    const auto padded = forward(seq_of(ids, ids.size() + 1 + rng.below(50)), p, Mode::Infer);
    REQUIRE(base == padded);
  }
}

TEST_CASE("cross entropy values") {
  CHECK(cross_entropy(std::vector<double>{1, 0, 0}, 0) == 0.0);
  CHECK(std::abs(cross_entropy(std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3}, 2) - std::log(3.0)) < 1e-12);
  CHECK(std::abs(cross_entropy(std::vector<double>{0.5, 0.25, 0.25}, 1) - std::log(4.0)) < 1e-12);
  CHECK(std::isfinite(cross_entropy(std::vector<double>{1, 0, 0}, 1)));
}

TEST_CASE("BPTT matches central finite differences") {
  const LstmShape s{20, 8, 8, 3};
  const auto base = random_params(s, 123, 0.5);
  Rng rng(7);
  const auto mask = dropout_mask(s.h, 0.3, rng);
  const auto seq = seq_of({3, 17, 5, 3, 11}, 7);
  const std::size_t label = 1;
  LstmCache cache;
  forward(seq, base, Mode::Train, mask, &cache);
  LstmParams grad(s);
  backward(cache, base, label, grad);

  auto loss = [&](const LstmParams &p) { return cross_entropy(forward(seq, p, Mode::Train, mask), label); };
  const double h = 1e-4;
  double worst = 0.0;
  LstmParams p = base;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double keep = p.data()[k];
    p.data()[k] = keep + h;
    const double up = loss(p);
    p.data()[k] = keep - h;
    const double down = loss(p);
    p.data()[k] = keep;
    const double num = (up - down) / (2 * h);
    const double ana = grad.data()[k];
    worst = std::max(worst, std::abs(ana - num) / std::max(std::abs(ana) + std::abs(num), 1e-6));
  }
  MESSAGE("max relative error " << worst);
  CHECK(worst < 1e-4);

  // rows of tokens absent from the sequence get exactly zero gradient
  for (TokenId id = 0; id < s.vocab; ++id) {
    if (id == 3 || id == 17 || id == 5 || id == 11) continue;
    for (std::size_t j = 0; j < s.d; ++j) REQUIRE(grad.E()[id * s.d + j] == 0.0);
  }
}

TEST_CASE("backward accumulates") {
  const LstmShape s{6, 3, 3, 3};
  const auto p = random_params(s, 4, 0.5);
  LstmCache cache;
  forward(seq_of({1, 2}, 2), p, Mode::Infer, {}, &cache);
  LstmParams once(s), twice(s);
  backward(cache, p, 0, once);
  backward(cache, p, 0, twice);
  backward(cache, p, 0, twice);
  for (std::size_t k = 0; k < once.size(); ++k) CHECK(twice.data()[k] == doctest::Approx(2 * once.data()[k]));
}

TEST_CASE("head gradient is probs minus one-hot") {
  const LstmShape s{6, 3, 3, 3};
  const auto p = random_params(s, 8, 0.5);
  LstmCache cache;
  const auto probs = forward(seq_of({4}, 1), p, Mode::Infer, {}, &cache);
  LstmParams g(s);
  backward(cache, p, 2, g);
  for (std::size_t c = 0; c < 3; ++c) CHECK(g.bout()[c] == doctest::Approx(probs[c] - (c == 2 ? 1.0 : 0.0)));
}

TEST_CASE("dropout masks") {
  Rng rng(3);
  CHECK(dropout_mask(5, 0.0, rng) == std::vector<double>(5, 1.0));
  CHECK_THROWS_AS(dropout_mask(5, 1.0, rng), Error);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto m = dropout_mask(1, 0.3, rng);
    REQUIRE((m[0] == 0.0 || std::abs(m[0] - 1.0 / 0.7) < 1e-15));
    sum += m[0];
  }
  CHECK(std::abs(sum / n - 1.0) < 0.01);

  // infer mode ignores the mask
  const LstmShape s{6, 3, 3, 3};
  const auto p = random_params(s, 1, 0.5);
  const std::vector<double> zeros(3, 0.0);
  CHECK(forward(seq_of({2}, 1), p, Mode::Infer, zeros) == forward(seq_of({2}, 1), p, Mode::Infer));
  CHECK(forward(seq_of({2}, 1), p, Mode::Train, std::vector<double>(3, 1.0)) ==
        forward(seq_of({2}, 1), p, Mode::Infer));
}

TEST_CASE("Adam arithmetic") {
  const AdamConfig cfg;
  std::vector<double> x{0.5};
  const std::vector<double> g{0.2};
  AdamState st;
  adam_step(x, g, st, cfg);
  // step 1: m_hat = g and v_hat = g^2
  const double x1 = 0.5 - cfg.lr * 0.2 / (0.2 + cfg.eps);
  CHECK(std::abs(x[0] - x1) < 1e-12);
  adam_step(x, g, st, cfg);
  const double m2 = 0.9 * (0.1 * 0.2) + 0.1 * 0.2;
  const double v2 = 0.999 * (0.001 * 0.04) + 0.001 * 0.04;
  const double x2 = x1 - cfg.lr * (m2 / (1 - 0.81)) / (std::sqrt(v2 / (1 - 0.999 * 0.999)) + cfg.eps);
  CHECK(std::abs(x[0] - x2) < 1e-12);
  CHECK(st.t == 2);

  std::vector<double> y{1.0, -2.0};
  AdamState zs;
  for (int i = 0; i < 10; ++i) adam_step(y, std::vector<double>{0.0, 0.0}, zs, cfg);
  CHECK(y == std::vector<double>{1.0, -2.0});

  std::vector<double> big{0.0, 0.0};
  AdamState bs;
  adam_step(big, std::vector<double>{50.0, -0.003}, bs, cfg);
  CHECK(big[0] == doctest::Approx(-cfg.lr).epsilon(1e-6));
  CHECK(big[1] == doctest::Approx(cfg.lr).epsilon(1e-4));
}

TEST_CASE("training reduces loss and is deterministic") {
  const LstmShape s{12, 8, 8, 3};
  std::vector<LstmExample> train, val;
  Rng data(4);
  for (int i = 0; i < 60; ++i) {
    const std::size_t label = i % 3;
    std::vector<TokenId> ids;
    const auto len = 1 + data.below(5);
    for (std::uint64_t t = 0; t < len; ++t) ids.push_back(static_cast<TokenId>(2 + 3 * label + data.below(3)));
    (i < 50 ? train : val).push_back({seq_of(ids, 6), label});
  }
  train.push_back({seq_of({}, 6), 0});
  Rng init(1);
  const auto p0 = init_params(s, init);
  LstmTrainConfig cfg;
  cfg.epochs = 20;
  cfg.batch = 8;
  cfg.adam.lr = 0.01;
  const auto r = train_lstm(train, val, p0, cfg);
  REQUIRE(r.log.size() == 20);
  CHECK(r.skipped_empty == 1);
  CHECK(r.log.back().train_loss < r.log.front().train_loss);
  CHECK(r.log.back().val_acc > 0.8);
  for (const auto &e : r.log) {
    CHECK(e.train_loss >= 0.0);
    CHECK(e.val_loss >= 0.0);
  }
  const auto again = train_lstm(train, val, p0, cfg);
  CHECK(std::equal(r.params.data().begin(), r.params.data().end(), again.params.data().begin()));
  for (std::size_t i = 0; i < r.log.size(); ++i) {
    CHECK(r.log[i].train_loss == again.log[i].train_loss);
    CHECK(r.log[i].val_loss == again.log[i].val_loss);
  }
  CHECK(epoch_log_csv(r.log) == epoch_log_csv(again.log));
  CHECK(epoch_log_csv(r.log).rfind("epoch,train_loss,val_loss,train_acc,val_acc\n", 0) == 0);

  cfg.epochs = 0;
  const auto none = train_lstm(train, val, p0, cfg);
  CHECK(none.log.empty());
  CHECK(std::equal(none.params.data().begin(), none.params.data().end(), p0.data().begin()));

  cfg.epochs = 2;
  cfg.clip_norm = 0.5;
  CHECK_NOTHROW(train_lstm(train, val, p0, cfg));
  CHECK_THROWS_AS(train_lstm({}, val, p0, cfg), Error);
}
