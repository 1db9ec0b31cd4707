#include "lstm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "error.hpp"
#include "rng.hpp"

namespace sentikit {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// y += a * x
void axpy(double a, const double *x, double *y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

// Fixed-order four-lane dot product; the lane split keeps results identical
// across runs while letting the loop pipeline.
double dot(const double *x, const double *y, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += x[k] * y[k];
    s1 += x[k + 1] * y[k + 1];
    s2 += x[k + 2] * y[k + 2];
    s3 += x[k + 3] * y[k + 3];
  }
  for (; k < n; ++k) s0 += x[k] * y[k];
  return (s0 + s1) + (s2 + s3);
}

std::vector<double> softmax(std::span<const double> z) {
  const double top = *std::max_element(z.begin(), z.end());
  std::vector<double> p(z.size());
  double sum = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) {
    p[c] = std::exp(z[c] - top);
    sum += p[c];
  }
  for (double &v : p) v /= sum;
  return p;
}

std::size_t argmax(std::span<const double> p) {
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

}  // namespace

std::size_t param_count(std::size_t vocab, std::size_t d, std::size_t h, std::size_t classes) {
  return vocab * d + 4 * (h * d + h * h + h) + (h * classes + classes);
}

LstmParams::LstmParams(const LstmShape &shape)
    : shape_(shape), data_(param_count(shape.vocab, shape.d, shape.h, shape.classes), 0.0) {
  if (shape.vocab < 1 || shape.d < 1 || shape.h < 1 || shape.classes < 1)
    throw Error(ErrorCode::InvalidArgument, "LSTM dimensions must all be >= 1");
}

LstmParams init_params(const LstmShape &shape, Rng &rng) {
  LstmParams p(shape);
  const double a = 1.0 / std::sqrt(static_cast<double>(shape.h));
  for (double &v : p.E()) v = rng.uniform(-0.1, 0.1);
  for (double &v : p.W()) v = rng.uniform(-a, a);
  for (double &v : p.U()) v = rng.uniform(-a, a);
  auto b = p.b();
  std::fill(b.begin() + static_cast<std::ptrdiff_t>(shape.h), b.begin() + static_cast<std::ptrdiff_t>(2 * shape.h), 1.0);
  for (double &v : p.Wout()) v = rng.uniform(-a, a);
  return p;
}

std::vector<double> forward(const PaddedSeq &seq, const LstmParams &params, Mode mode,
                            std::span<const double> mask, LstmCache *cache) {
  const auto &s = params.shape();
  const std::size_t h = s.h, d = s.d, G = 4 * s.h;
  if (seq.true_len == 0) throw Error(ErrorCode::EmptySequence, "sequence has no real tokens");
  if (seq.true_len > seq.ids.size()) throw Error(ErrorCode::InvalidArgument, "true_len exceeds sequence length");
  const std::size_t T = seq.true_len;
  for (std::size_t t = 0; t < T; ++t) {
    if (seq.ids[t] >= s.vocab) throw Error(ErrorCode::DimMismatch, "token id outside the embedding table");
  }
  const bool use_mask = mode == Mode::Train && !mask.empty();
  if (use_mask && mask.size() != h) throw Error(ErrorCode::DimMismatch, "dropout mask size differs from hidden size");

  LstmCache local;
  LstmCache &c = cache ? *cache : local;
  c.ids.assign(seq.ids.begin(), seq.ids.begin() + static_cast<std::ptrdiff_t>(T));
  c.gates.assign(T * G, 0.0);
  c.c.assign((T + 1) * h, 0.0);
  c.hs.assign((T + 1) * h, 0.0);
  c.tanh_c.assign(T * h, 0.0);

  const auto E = params.E(), W = params.W(), U = params.U(), b = params.b();
  for (std::size_t t = 0; t < T; ++t) {
    double *z = c.gates.data() + t * G;
    std::copy(b.begin(), b.end(), z);
    const double *x = E.data() + c.ids[t] * d;
    for (std::size_t k = 0; k < d; ++k) axpy(x[k], W.data() + k * G, z, G);
    const double *hp = c.hs.data() + t * h;
    for (std::size_t j = 0; j < h; ++j) {
      if (hp[j] != 0.0) axpy(hp[j], U.data() + j * G, z, G);
    }
    const double *cp = c.c.data() + t * h;
    double *cn = c.c.data() + (t + 1) * h;
    double *hn = c.hs.data() + (t + 1) * h;
    double *tc = c.tanh_c.data() + t * h;
    for (std::size_t j = 0; j < h; ++j) {
      const double ig = sigmoid(z[j]);
      const double fg = sigmoid(z[h + j]);
      const double gg = std::tanh(z[2 * h + j]);
      const double og = sigmoid(z[3 * h + j]);
      z[j] = ig;
      z[h + j] = fg;
      z[2 * h + j] = gg;
      z[3 * h + j] = og;
      cn[j] = fg * cp[j] + ig * gg;
      tc[j] = std::tanh(cn[j]);
      hn[j] = og * tc[j];
    }
  }

  const double *hT = c.hs.data() + T * h;
  c.mask.assign(h, 1.0);
  if (use_mask) std::copy(mask.begin(), mask.end(), c.mask.begin());
  c.dropped.resize(h);
  for (std::size_t j = 0; j < h; ++j) c.dropped[j] = hT[j] * c.mask[j];

  const auto Wout = params.Wout(), bout = params.bout();
  std::vector<double> logits(bout.begin(), bout.end());
  for (std::size_t k = 0; k < s.classes; ++k) logits[k] += dot(Wout.data() + k * h, c.dropped.data(), h);
  c.probs = softmax(logits);
  return c.probs;
}

double cross_entropy(std::span<const double> probs, std::size_t label) {
  if (label >= probs.size()) throw Error(ErrorCode::InvalidArgument, "label outside the class range");
  return -std::log(std::max(probs[label], 1e-12));
}

void backward(const LstmCache &cache, const LstmParams &params, std::size_t label, LstmParams &grad) {
  const auto &s = params.shape();
  const std::size_t h = s.h, d = s.d, G = 4 * s.h, T = cache.ids.size();
  if (label >= s.classes) throw Error(ErrorCode::InvalidArgument, "label outside the class range");

  std::vector<double> dlogits(cache.probs);
  dlogits[label] -= 1.0;

  auto gWout = grad.Wout(), gbout = grad.bout();
  const auto Wout = params.Wout();
  std::vector<double> dh(h, 0.0);
  for (std::size_t k = 0; k < s.classes; ++k) {
    gbout[k] += dlogits[k];
    axpy(dlogits[k], cache.dropped.data(), gWout.data() + k * h, h);
    axpy(dlogits[k], Wout.data() + k * h, dh.data(), h);
  }
  for (std::size_t j = 0; j < h; ++j) dh[j] *= cache.mask[j];

  const auto E = params.E(), W = params.W(), U = params.U();
  auto gE = grad.E(), gW = grad.W(), gU = grad.U(), gb = grad.b();
  std::vector<double> dc(h, 0.0), dz(G), dh_prev(h);
  for (std::size_t t = T; t-- > 0;) {
    const double *gate = cache.gates.data() + t * G;
    const double *tc = cache.tanh_c.data() + t * h;
    const double *cp = cache.c.data() + t * h;
    for (std::size_t j = 0; j < h; ++j) {
      const double ig = gate[j], fg = gate[h + j], gg = gate[2 * h + j], og = gate[3 * h + j];
      const double dct = dc[j] + dh[j] * og * (1.0 - tc[j] * tc[j]);
      dz[j] = dct * gg * ig * (1.0 - ig);
      dz[h + j] = dct * cp[j] * fg * (1.0 - fg);
      dz[2 * h + j] = dct * ig * (1.0 - gg * gg);
      dz[3 * h + j] = dh[j] * tc[j] * og * (1.0 - og);
      dc[j] = dct * fg;
    }
    for (std::size_t g = 0; g < G; ++g) gb[g] += dz[g];
    const double *x = E.data() + cache.ids[t] * d;
    double *gx = gE.data() + cache.ids[t] * d;
    for (std::size_t k = 0; k < d; ++k) {
      axpy(x[k], dz.data(), gW.data() + k * G, G);
      gx[k] += dot(W.data() + k * G, dz.data(), G);
    }
    const double *hp = cache.hs.data() + t * h;
    for (std::size_t j = 0; j < h; ++j) {
      if (hp[j] != 0.0) axpy(hp[j], dz.data(), gU.data() + j * G, G);
      dh_prev[j] = dot(U.data() + j * G, dz.data(), G);
    }
    dh.swap(dh_prev);
  }
}

std::vector<double> dropout_mask(std::size_t h, double p, Rng &rng) {
  if (!(p >= 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidArgument, "dropout must be in [0, 1)");
  std::vector<double> mask(h, 1.0);
  if (p == 0.0) return mask;
  const double keep = 1.0 / (1.0 - p);
  for (double &m : mask) m = rng.uniform() < p ? 0.0 : keep;
  return mask;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState &state,
               const AdamConfig &cfg) {
  if (params.size() != grads.size()) throw Error(ErrorCode::DimMismatch, "parameter and gradient sizes differ");
  if (state.m.size() != params.size()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
    state.t = 0;
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    state.m[k] = cfg.beta1 * state.m[k] + (1.0 - cfg.beta1) * g;
    state.v[k] = cfg.beta2 * state.v[k] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = state.m[k] / c1;
    const double v_hat = state.v[k] / c2;
    params[k] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

LstmTrainResult train_lstm(std::span<const LstmExample> train, std::span<const LstmExample> val,
                           LstmParams params, const LstmTrainConfig &cfg) {
  if (!(cfg.adam.lr > 0.0)) throw Error(ErrorCode::InvalidArgument, "learning rate must be > 0");
  if (cfg.batch < 1) throw Error(ErrorCode::InvalidArgument, "batch size must be >= 1");
  if (!(cfg.dropout >= 0.0 && cfg.dropout < 1.0)) throw Error(ErrorCode::InvalidArgument, "dropout must be in [0, 1)");
  if (train.empty()) throw Error(ErrorCode::EmptyTrainingSet, "LSTM training set is empty");

  LstmTrainResult result;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].seq.true_len == 0)
      ++result.skipped_empty;
    else
      order.push_back(i);
  }
  if (order.empty()) throw Error(ErrorCode::EmptyTrainingSet, "every LSTM training sequence is empty");

  const std::size_t h = params.shape().h;
  Rng rng(cfg.seed);
  AdamState adam;
  LstmParams grad(params.shape());
  LstmCache cache;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t end = std::min(order.size(), start + cfg.batch);
      auto g = grad.data();
      std::fill(g.begin(), g.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const auto &ex = train[order[k]];
        const auto mask = cfg.dropout > 0.0 ? dropout_mask(h, cfg.dropout, rng) : std::vector<double>{};
        const auto probs = forward(ex.seq, params, Mode::Train, mask, &cache);
        loss_sum += cross_entropy(probs, ex.label);
        if (argmax(probs) == ex.label) ++correct;
        backward(cache, params, ex.label, grad);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (double &v : g) v *= scale;
      if (cfg.clip_norm > 0.0) {
        double norm = 0.0;
        for (double v : g) norm += v * v;
        norm = std::sqrt(norm);
        if (norm > cfg.clip_norm) {
          const double shrink = cfg.clip_norm / norm;
          for (double &v : g) v *= shrink;
        }
      }
      adam_step(params.data(), grad.data(), adam, cfg.adam);
    }

    EpochLog log;
    log.epoch = epoch;
    log.train_loss = loss_sum / static_cast<double>(order.size());
    log.train_acc = static_cast<double>(correct) / static_cast<double>(order.size());
    double val_loss = 0.0;
    std::size_t val_correct = 0, val_n = 0;
    for (const auto &ex : val) {
      if (ex.seq.true_len == 0) continue;
      const auto probs = forward(ex.seq, params, Mode::Infer);
      val_loss += cross_entropy(probs, ex.label);
      if (argmax(probs) == ex.label) ++val_correct;
      ++val_n;
    }
    if (val_n > 0) {
      log.val_loss = val_loss / static_cast<double>(val_n);
      log.val_acc = static_cast<double>(val_correct) / static_cast<double>(val_n);
    }
    result.log.push_back(log);
  }
  result.params = std::move(params);
  return result;
}

std::string epoch_log_csv(std::span<const EpochLog> log) {
  std::string out = "epoch,train_loss,val_loss,train_acc,val_acc\n";
  char buf[160];
  for (const auto &e : log) {
    std::snprintf(buf, sizeof buf, "%zu,%.9f,%.9f,%.9f,%.9f\n", e.epoch, e.train_loss, e.val_loss,
                  e.train_acc, e.val_acc);
    out += buf;
  }
  return out;
}

}  // namespace sentikit
