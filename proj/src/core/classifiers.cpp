#include "classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "error.hpp"
#include "rng.hpp"

namespace sentikit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_vector(const SparseVector &x, std::size_t dim) {
  if (x.dim != dim)
    throw Error(ErrorCode::DimMismatch, "feature vector has dim " + std::to_string(x.dim) +
                                            ", model expects " + std::to_string(dim));
  for (const auto &[id, _] : x.entries) {
    if (id >= dim) throw Error(ErrorCode::DimMismatch, "feature index out of range");
  }
}

std::size_t check_training_set(std::span<const SparseVector> X, std::span<const Sentiment> y) {
  if (X.size() != y.size())
    throw Error(ErrorCode::LengthMismatch, "feature and label counts differ");
  if (X.empty()) throw Error(ErrorCode::EmptyTrainingSet, "training set is empty");
  const std::size_t dim = X.front().dim;
  for (const auto &x : X) check_vector(x, dim);
  return dim;
}

Probs softmax(const Probs &scores) {
  double top = kNegInf;
  for (double s : scores) top = std::max(top, s);
  Probs p{};
  double sum = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    p[c] = scores[c] == kNegInf ? 0.0 : std::exp(scores[c] - top);
    sum += p[c];
  }
  for (double &v : p) v /= sum;
  return p;
}

double clamped_log(double p) { return std::log(std::max(p, 1e-12)); }

}  // namespace

Sentiment argmax_label(const Probs &probs) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (probs[c] > probs[best]) best = c;
  }
  return static_cast<Sentiment>(best);
}

std::vector<double> class_weights(std::span<const Sentiment> y, bool balanced) {
  std::vector<double> w(y.size(), 1.0);
  if (!balanced || y.empty()) return w;
  ClassCounts counts{};
  for (auto s : y) ++counts[index_of(s)];
  const auto present = static_cast<double>(std::count_if(counts.begin(), counts.end(), [](auto n) { return n > 0; }));
  for (std::size_t i = 0; i < y.size(); ++i)
    w[i] = static_cast<double>(y.size()) / (present * static_cast<double>(counts[index_of(y[i])]));
  return w;
}

// ---- Naive Bayes ----

NbModel train_nb(std::span<const SparseVector> X, std::span<const Sentiment> y, double alpha, bool balanced) {
  if (y.empty()) throw Error(ErrorCode::MissingClass, "no training samples, so no class is present");
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be > 0");
  const std::size_t dim = check_training_set(X, y);
  const auto w = class_weights(y, balanced);

  NbModel m;
  m.dim = dim;
  m.alpha = alpha;
  Probs class_mass{};
  std::array<std::vector<double>, kNumClasses> term_mass;
  for (auto &v : term_mass) v.assign(dim, 0.0);
  for (std::size_t i = 0; i < X.size(); ++i) {
    const std::size_t c = index_of(y[i]);
    class_mass[c] += w[i];
    for (const auto &[id, v] : X[i].entries) term_mass[c][id] += w[i] * v;
  }
  const double total = std::accumulate(class_mass.begin(), class_mass.end(), 0.0);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    m.log_prior[c] = class_mass[c] > 0.0 ? std::log(class_mass[c] / total) : kNegInf;
    const double denom = std::accumulate(term_mass[c].begin(), term_mass[c].end(), 0.0) +
                         alpha * static_cast<double>(dim);
    m.log_likelihood[c].resize(dim);
    for (std::size_t t = 0; t < dim; ++t)
      m.log_likelihood[c][t] = std::log((term_mass[c][t] + alpha) / denom);
  }
  return m;
}

Prediction predict(const NbModel &model, const SparseVector &x) {
  check_vector(x, model.dim);
  Probs scores = model.log_prior;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (scores[c] == kNegInf) continue;
    for (const auto &[id, v] : x.entries) scores[c] += v * model.log_likelihood[c][id];
  }
  Prediction p;
  p.probs = softmax(scores);
  p.label = argmax_label(p.probs);
  return p;
}

// ---- Logistic regression ----

namespace {

Probs lr_logits(const LrModel &m, const SparseVector &x) {
  Probs z = m.b;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const double *row = m.W.data() + c * m.dim;
    for (const auto &[id, v] : x.entries) z[c] += row[id] * v;
  }
  return z;
}

double squared_norm(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

LrModel make_lr(std::size_t dim, double l2) {
  LrModel m;
  m.dim = dim;
  m.W.assign(kNumClasses * dim, 0.0);
  m.l2 = l2;
  return m;
}

double lr_objective(const LrModel &model, std::span<const SparseVector> X, std::span<const Sentiment> y,
                    std::span<const double> weights, std::span<const std::size_t> rows) {
  double loss = 0.0;
  for (std::size_t i : rows) {
    const Probs p = softmax(lr_logits(model, X[i]));
    loss -= weights[i] * clamped_log(p[index_of(y[i])]);
  }
  if (!rows.empty()) loss /= static_cast<double>(rows.size());
  return loss + 0.5 * model.l2 * squared_norm(model.W);
}

void lr_gradient(const LrModel &model, std::span<const SparseVector> X, std::span<const Sentiment> y,
                 std::span<const double> weights, std::span<const std::size_t> rows,
                 std::vector<double> &gW, Probs &gb) {
  gW.assign(model.W.size(), 0.0);
  gb.fill(0.0);
  const double scale = rows.empty() ? 0.0 : 1.0 / static_cast<double>(rows.size());
  for (std::size_t i : rows) {
    Probs r = softmax(lr_logits(model, X[i]));
    r[index_of(y[i])] -= 1.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double g = weights[i] * r[c] * scale;
      gb[c] += g;
      double *row = gW.data() + c * model.dim;
      for (const auto &[id, v] : X[i].entries) row[id] += g * v;
    }
  }
  for (std::size_t k = 0; k < gW.size(); ++k) gW[k] += model.l2 * model.W[k];
}

LrModel train_lr(std::span<const SparseVector> X, std::span<const Sentiment> y, std::size_t dim,
                 const LrConfig &cfg) {
  if (!(cfg.lr > 0.0)) throw Error(ErrorCode::InvalidArgument, "learning rate must be > 0");
  if (cfg.batch < 1) throw Error(ErrorCode::InvalidArgument, "batch size must be >= 1");
  if (cfg.l2 < 0.0) throw Error(ErrorCode::InvalidArgument, "l2 must be >= 0");
  if (check_training_set(X, y) != dim) throw Error(ErrorCode::DimMismatch, "training vectors do not match dim");

  LrModel m = make_lr(dim, cfg.l2);
  const auto w = class_weights(y, cfg.balanced);
  std::vector<std::size_t> all(X.size());
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> order = all;
  Rng rng(cfg.seed);

  double prev = lr_objective(m, X, y, w, all);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch) {
      const std::size_t end = std::min(order.size(), start + cfg.batch);
      const double step = cfg.lr / static_cast<double>(end - start);
      // weight decay applied densely, data term sparsely
      const double decay = 1.0 - cfg.lr * cfg.l2;
      if (decay != 1.0) {
        for (double &v : m.W) v *= decay;
      }
      Probs gb{};
      std::vector<std::pair<std::size_t, Probs>> residuals;
      residuals.reserve(end - start);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        Probs r = softmax(lr_logits(m, X[i]));
        r[index_of(y[i])] -= 1.0;
        for (double &v : r) v *= w[i];
        residuals.emplace_back(i, r);
      }
      for (const auto &[i, r] : residuals) {
        for (std::size_t c = 0; c < kNumClasses; ++c) {
          gb[c] += r[c];
          double *row = m.W.data() + c * dim;
          for (const auto &[id, v] : X[i].entries) row[id] -= step * r[c] * v;
        }
      }
      for (std::size_t c = 0; c < kNumClasses; ++c) m.b[c] -= step * gb[c];
    }
    m.epochs_run = epoch + 1;
    const double obj = lr_objective(m, X, y, w, all);
    const bool converged = prev - obj < cfg.tol;
    prev = obj;
    if (converged) break;
  }
  return m;
}

Prediction predict(const LrModel &model, const SparseVector &x) {
  check_vector(x, model.dim);
  Prediction p;
  p.probs = softmax(lr_logits(model, x));
  p.label = argmax_label(p.probs);
  return p;
}

// ---- Random forest ----

double gini(const Probs &counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double g = 1.0;
  for (double c : counts) {
    const double q = c / total;
    g -= q * q;
  }
  return g;
}

namespace {

double value_at(const SparseVector &x, std::size_t feature) {
  auto it = std::lower_bound(x.entries.begin(), x.entries.end(), feature,
                             [](const auto &e, std::size_t f) { return e.first < f; });
  return it != x.entries.end() && it->first == feature ? it->second : 0.0;
}

struct Split {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity = std::numeric_limits<double>::infinity();
};

class TreeBuilder {
 public:
  TreeBuilder(std::span<const SparseVector> X, std::span<const Sentiment> y, std::span<const double> w,
              std::size_t dim, std::size_t per_split, std::size_t max_depth, Rng &rng)
      : X_(X), y_(y), w_(w), per_split_(per_split), max_depth_(max_depth), rng_(rng),
        mark_(dim, 0), slot_(dim, 0) {}

  DecisionTree build(std::vector<std::size_t> samples) {
    DecisionTree tree;
    struct Pending {
      std::uint32_t node;
      std::vector<std::size_t> samples;
      std::size_t depth;
    };
    std::vector<Pending> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, std::move(samples), 0});
    while (!stack.empty()) {
      Pending job = std::move(stack.back());
      stack.pop_back();
      Probs counts{};
      for (std::size_t i : job.samples) counts[index_of(y_[i])] += w_[i];
      tree.nodes[job.node].counts = counts;

      if (gini(counts) <= 0.0 || job.samples.size() < 2 ||
          (max_depth_ != 0 && job.depth >= max_depth_))
        continue;
      const Split split = best_split(job.samples, counts);
      if (!split.found) continue;

      std::vector<std::size_t> left, right;
      for (std::size_t i : job.samples)
        (value_at(X_[i], split.feature) <= split.threshold ? left : right).push_back(i);

      const auto l = static_cast<std::uint32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode &node = tree.nodes[job.node];
      node.feature = static_cast<std::int32_t>(split.feature);
      node.threshold = split.threshold;
      node.left = l;
      node.right = l + 1;
      // right pushed first so the left subtree is expanded first
      stack.push_back({l + 1, std::move(right), job.depth + 1});
      stack.push_back({l, std::move(left), job.depth + 1});
    }
    return tree;
  }

 private:
  struct Entry {
    double value;
    std::size_t cls;
    double weight;
  };

  // Samples features uniformly among those not constant in the node until
  // per_split_ non-constant features were scored or none remain.
  Split best_split(const std::vector<std::size_t> &samples, const Probs &node_counts) {
    ++stamp_;
    std::vector<std::uint32_t> candidates;
    for (std::size_t i : samples) {
      for (const auto &[id, _] : X_[i].entries) {
        if (mark_[id] != stamp_) {
          mark_[id] = stamp_;
          candidates.push_back(id);
        }
      }
    }
    // deterministic order before the seeded draw
    std::sort(candidates.begin(), candidates.end());

    Split best;
    const double node_weight = std::accumulate(node_counts.begin(), node_counts.end(), 0.0);
    std::size_t scored = 0;
    std::size_t drawn = 0;
    std::vector<std::vector<Entry>> batch;
    while (scored < per_split_ && drawn < candidates.size()) {
      const std::size_t want = std::min(per_split_ - scored, candidates.size() - drawn);
      ++stamp_;
      batch.assign(want, {});
      for (std::size_t k = 0; k < want; ++k) {
        const std::size_t j = drawn + static_cast<std::size_t>(rng_.below(candidates.size() - drawn));
        std::swap(candidates[drawn], candidates[j]);
        mark_[candidates[drawn]] = stamp_;
        slot_[candidates[drawn]] = static_cast<std::uint32_t>(k);
        ++drawn;
      }
      for (std::size_t i : samples) {
        for (const auto &[id, v] : X_[i].entries) {
          if (mark_[id] == stamp_) batch[slot_[id]].push_back({v, index_of(y_[i]), w_[i]});
        }
      }
      for (std::size_t k = 0; k < want; ++k) {
        const std::size_t feature = candidates[drawn - want + k];
        if (score_feature(feature, batch[k], samples.size(), node_counts, node_weight, best)) ++scored;
      }
    }
    return best;
  }

  // Returns false when the feature is constant in the node.
  static bool score_feature(std::size_t feature, std::vector<Entry> &present, std::size_t node_n,
                            const Probs &node_counts, double node_weight, Split &best) {
    std::sort(present.begin(), present.end(), [](const Entry &a, const Entry &b) { return a.value < b.value; });
    Probs zero_counts = node_counts;
    for (const auto &e : present) zero_counts[e.cls] -= e.weight;
    const bool has_zero = present.size() < node_n;

    // walk value groups in ascending order with the implicit zero group merged in
    Probs left{};
    std::size_t pos = 0;
    bool zero_done = !has_zero;
    std::size_t groups = 0;
    double prev_value = 0.0;
    auto next_value = [&](double &v) {
      if (!zero_done && (pos == present.size() || present[pos].value >= 0.0)) {
        v = 0.0;
        return true;
      }
      if (pos < present.size()) {
        v = present[pos].value;
        return true;
      }
      return false;
    };
    double v = 0.0;
    while (next_value(v)) {
      if (groups > 0) {
        const Probs right = [&] {
          Probs r{};
          for (std::size_t c = 0; c < kNumClasses; ++c) r[c] = node_counts[c] - left[c];
          return r;
        }();
        const double wl = std::accumulate(left.begin(), left.end(), 0.0);
        const double wr = node_weight - wl;
        const double impurity = (wl * gini(left) + wr * gini(right)) / node_weight;
        if (impurity < best.impurity) {
          double threshold = prev_value + (v - prev_value) / 2.0;
          if (threshold >= v) threshold = prev_value;
          best = {true, feature, threshold, impurity};
        }
      }
      // consume the group with value v
      if (!zero_done && v == 0.0) {
        for (std::size_t c = 0; c < kNumClasses; ++c) left[c] += zero_counts[c];
        zero_done = true;
      }
      while (pos < present.size() && present[pos].value == v) {
        left[present[pos].cls] += present[pos].weight;
        ++pos;
      }
      prev_value = v;
      ++groups;
    }
    return groups > 1;
  }

  std::span<const SparseVector> X_;
  std::span<const Sentiment> y_;
  std::span<const double> w_;
  std::size_t per_split_;
  std::size_t max_depth_;
  Rng &rng_;
  std::vector<std::uint32_t> mark_;
  std::vector<std::uint32_t> slot_;
  std::uint32_t stamp_ = 0;
};

}  // namespace

Sentiment DecisionTree::vote(const SparseVector &x) const {
  std::size_t n = 0;
  while (nodes[n].feature >= 0) {
    const auto &node = nodes[n];
    n = value_at(x, static_cast<std::size_t>(node.feature)) <= node.threshold ? node.left : node.right;
  }
  return argmax_label(nodes[n].counts);
}

std::size_t DecisionTree::depth() const {
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [n, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (nodes[n].feature >= 0) {
      stack.emplace_back(nodes[n].left, d + 1);
      stack.emplace_back(nodes[n].right, d + 1);
    }
  }
  return deepest;
}

RfModel train_rf(std::span<const SparseVector> X, std::span<const Sentiment> y, std::size_t dim,
                 const RfConfig &cfg) {
  if (cfg.n_trees < 1) throw Error(ErrorCode::InvalidArgument, "n_trees must be >= 1");
  if (check_training_set(X, y) != dim) throw Error(ErrorCode::DimMismatch, "training vectors do not match dim");
  RfModel m;
  m.dim = dim;
  m.max_depth = cfg.max_depth;
  m.features_per_split = cfg.features_per_split != 0
                             ? std::min(cfg.features_per_split, dim)
                             : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(dim))));
  const auto w = class_weights(y, cfg.balanced);
  const std::size_t n = X.size();
  m.trees.reserve(cfg.n_trees);
  for (std::size_t t = 0; t < cfg.n_trees; ++t) {
    Rng rng(cfg.seed, t);
    std::vector<std::size_t> samples(n);
    if (cfg.bootstrap) {
      for (auto &s : samples) s = static_cast<std::size_t>(rng.below(n));
      std::sort(samples.begin(), samples.end());
    } else {
      std::iota(samples.begin(), samples.end(), 0);
    }
    TreeBuilder builder(X, y, w, dim, m.features_per_split, cfg.max_depth, rng);
    m.trees.push_back(builder.build(std::move(samples)));
  }
  return m;
}

Prediction predict(const RfModel &model, const SparseVector &x) {
  check_vector(x, model.dim);
  Probs votes{};
  for (const auto &tree : model.trees) votes[index_of(tree.vote(x))] += 1.0;
  Prediction p;
  for (std::size_t c = 0; c < kNumClasses; ++c) p.probs[c] = votes[c] / static_cast<double>(model.trees.size());
  p.label = argmax_label(p.probs);
  return p;
}

}  // namespace sentikit
