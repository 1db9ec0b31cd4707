#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "corpus.hpp"
#include "features.hpp"

namespace sentikit {

using Probs = std::array<double, kNumClasses>;

struct Prediction {
  Sentiment label = Sentiment::Negative;
  Probs probs{};
};

// argmax with ties to the lowest class index
Sentiment argmax_label(const Probs &probs);

// Per-sample weights: all ones, or n / (C * n_c) when balanced.
std::vector<double> class_weights(std::span<const Sentiment> y, bool balanced);

struct NbModel {
  std::size_t dim = 0;
  double alpha = 1.0;
  Probs log_prior{};                                    // -inf for a class absent in training
  std::array<std::vector<double>, kNumClasses> log_likelihood;  // [class][term]
};

// Multinomial NB over (possibly fractional) term weights with Laplace alpha.
// Classes absent from y get prior zero and are never predicted.
NbModel train_nb(std::span<const SparseVector> X, std::span<const Sentiment> y, double alpha = 1.0,
                 bool balanced = false);
Prediction predict(const NbModel &model, const SparseVector &x);

struct LrConfig {
  double lr = 0.1;
  std::size_t epochs = 200;
  std::size_t batch = 64;
  double l2 = 1e-4;
  // stop once an epoch improves the full training objective by less than this
  double tol = 1e-6;
  std::uint64_t seed = 42;
  bool balanced = false;
};

struct LrModel {
  std::size_t dim = 0;
  std::vector<double> W;  // kNumClasses x dim, row-major
  Probs b{};
  double l2 = 0.0;
  std::size_t epochs_run = 0;
};

LrModel make_lr(std::size_t dim, double l2);
// Weighted mean softmax cross-entropy over the listed rows plus (l2/2)||W||^2.
double lr_objective(const LrModel &model, std::span<const SparseVector> X, std::span<const Sentiment> y,
                    std::span<const double> weights, std::span<const std::size_t> rows);
// Gradient of lr_objective; gW has kNumClasses * dim entries.
void lr_gradient(const LrModel &model, std::span<const SparseVector> X, std::span<const Sentiment> y,
                 std::span<const double> weights, std::span<const std::size_t> rows,
                 std::vector<double> &gW, Probs &gb);
LrModel train_lr(std::span<const SparseVector> X, std::span<const Sentiment> y, std::size_t dim,
                 const LrConfig &cfg);
Prediction predict(const LrModel &model, const SparseVector &x);

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // left when x[feature] <= threshold
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  Probs counts{};  // weighted class counts reaching this node
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  Sentiment vote(const SparseVector &x) const;
  std::size_t depth() const;
};

struct RfConfig {
  std::size_t n_trees = 100;
  std::size_t max_depth = 32;          // 0 = unlimited
  std::size_t features_per_split = 0;  // 0 = ceil(sqrt(dim))
  bool bootstrap = true;
  std::uint64_t seed = 42;
  bool balanced = false;
};

struct RfModel {
  std::size_t dim = 0;
  std::size_t max_depth = 0;
  std::size_t features_per_split = 0;
  std::vector<DecisionTree> trees;
};

double gini(const Probs &counts);
RfModel train_rf(std::span<const SparseVector> X, std::span<const Sentiment> y, std::size_t dim,
                 const RfConfig &cfg);
// Majority vote; probabilities are vote fractions.
Prediction predict(const RfModel &model, const SparseVector &x);

}  // namespace sentikit
