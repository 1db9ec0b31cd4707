#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "features.hpp"

namespace sentikit {

class Rng;

struct LstmShape {
  std::size_t vocab = 0;
  std::size_t d = 64;
  std::size_t h = 64;
  std::size_t classes = 3;
};

std::size_t param_count(std::size_t vocab, std::size_t d, std::size_t h, std::size_t classes);

// All parameters live in one flat buffer; the accessors are views into it.
//   E     vocab x d
//   W     d x 4h     (input weights, gate blocks i f g o along each row)
//   U     h x 4h     (recurrent weights, same layout)
//   b     4h
//   Wout  classes x h
//   bout  classes
class LstmParams {
 public:
  LstmParams() = default;
  explicit LstmParams(const LstmShape &shape);  // zero-filled

  const LstmShape &shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  std::span<double> E() { return view(0, shape_.vocab * shape_.d); }
  std::span<double> W() { return view(off_W(), shape_.d * 4 * shape_.h); }
  std::span<double> U() { return view(off_U(), shape_.h * 4 * shape_.h); }
  std::span<double> b() { return view(off_b(), 4 * shape_.h); }
  std::span<double> Wout() { return view(off_Wout(), shape_.classes * shape_.h); }
  std::span<double> bout() { return view(off_bout(), shape_.classes); }
  std::span<const double> E() const { return cview(0, shape_.vocab * shape_.d); }
  std::span<const double> W() const { return cview(off_W(), shape_.d * 4 * shape_.h); }
  std::span<const double> U() const { return cview(off_U(), shape_.h * 4 * shape_.h); }
  std::span<const double> b() const { return cview(off_b(), 4 * shape_.h); }
  std::span<const double> Wout() const { return cview(off_Wout(), shape_.classes * shape_.h); }
  std::span<const double> bout() const { return cview(off_bout(), shape_.classes); }

 private:
  std::size_t off_W() const { return shape_.vocab * shape_.d; }
  std::size_t off_U() const { return off_W() + shape_.d * 4 * shape_.h; }
  std::size_t off_b() const { return off_U() + shape_.h * 4 * shape_.h; }
  std::size_t off_Wout() const { return off_b() + 4 * shape_.h; }
  std::size_t off_bout() const { return off_Wout() + shape_.classes * shape_.h; }
  std::span<double> view(std::size_t off, std::size_t n) { return std::span<double>(data_).subspan(off, n); }
  std::span<const double> cview(std::size_t off, std::size_t n) const {
    return std::span<const double>(data_).subspan(off, n);
  }

  LstmShape shape_;
  std::vector<double> data_;
};

// Gate and head weights uniform(-1/sqrt(h), 1/sqrt(h)), embeddings
// uniform(-0.1, 0.1), forget-gate bias 1, other biases 0.
LstmParams init_params(const LstmShape &shape, Rng &rng);

enum class Mode { Train, Infer };

struct LstmCache {
  std::vector<TokenId> ids;       // the true_len real tokens
  std::vector<double> gates;      // T x 4h post-activation (i f g o)
  std::vector<double> c;          // (T+1) x h, row 0 is the zero state
  std::vector<double> hs;         // (T+1) x h
  std::vector<double> tanh_c;     // T x h
  std::vector<double> mask;       // h, dropout scale per unit (1 in infer mode)
  std::vector<double> dropped;    // h, masked final hidden state
  std::vector<double> probs;      // classes
};

// Runs the cell over positions [0, true_len); classification reads h there.
// In Train mode the mask (entries 0 or 1/(1-p)) multiplies the final hidden
// state; an empty mask means no dropout. Infer mode ignores the mask.
std::vector<double> forward(const PaddedSeq &seq, const LstmParams &params, Mode mode,
                            std::span<const double> mask = {}, LstmCache *cache = nullptr);

double cross_entropy(std::span<const double> probs, std::size_t label);

// Adds d cross_entropy / d params for one example into grad.
void backward(const LstmCache &cache, const LstmParams &params, std::size_t label, LstmParams &grad);

std::vector<double> dropout_mask(std::size_t h, double p, Rng &rng);

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
};

void adam_step(std::span<double> params, std::span<const double> grads, AdamState &state,
               const AdamConfig &cfg);

struct LstmTrainConfig {
  AdamConfig adam;
  std::size_t batch = 32;
  std::size_t epochs = 20;
  double dropout = 0.3;
  std::uint64_t seed = 42;
  // global gradient norm cap; 0 disables clipping
  double clip_norm = 0.0;
};

struct LstmExample {
  PaddedSeq seq;
  std::size_t label = 0;
};

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;
};

struct LstmTrainResult {
  LstmParams params;
  std::vector<EpochLog> log;
  std::size_t skipped_empty = 0;
};

// Mini-batch Adam on mean batch cross-entropy. Examples with true_len 0 are
// skipped. train_loss/train_acc are running means over the epoch (dropout
// active); validation runs in infer mode after each epoch.
LstmTrainResult train_lstm(std::span<const LstmExample> train, std::span<const LstmExample> val,
                           LstmParams params, const LstmTrainConfig &cfg);

std::string epoch_log_csv(std::span<const EpochLog> log);

}  // namespace sentikit
