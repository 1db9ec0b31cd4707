#include "app.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "error.hpp"
#include "fileio.hpp"
#include "rng.hpp"

namespace sentikit {

using nlohmann::json;

namespace {

// Stream id for the LSTM weight initializer, kept apart from the shuffling stream.
constexpr std::uint64_t kInitStream = 0x4c53544d;

const std::vector<std::string> &label_names() {
  static const std::vector<std::string> names = {"negative", "positive", "neutral"};
  return names;
}

std::vector<TokenSeq> pick(const std::vector<TokenSeq> &docs, std::span<const std::size_t> idx) {
  std::vector<TokenSeq> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(docs[i]);
  return out;
}

std::vector<Sentiment> pick(const std::vector<Sentiment> &labels, std::span<const std::size_t> idx) {
  std::vector<Sentiment> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(labels[i]);
  return out;
}

json hyper_json(ModelKind kind, const RunConfig &cfg) {
  const json all = to_json(cfg);
  json h;
  h["pipeline"] = all["pipeline"];
  h["features"] = all["features"];
  h[to_string(kind)] = all[to_string(kind)];
  if (kind == ModelKind::Lstm) h["split"] = all["split"];
  return h;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

PipelineConfig make_pipeline(std::size_t max_tokens, const StageFlags &stages, const Resources &res) {
  PipelineConfig p;
  p.max_tokens = max_tokens;
  p.stages = stages;
  p.slang_lexicon = res.slang;
  p.stopwords = res.stopwords;
  p.validate();
  return p;
}

std::vector<TokenSeq> preprocess_all(const LabeledCorpus &corpus, const PipelineConfig &pipe, const Stemmer *stemmer) {
  std::vector<TokenSeq> docs;
  docs.reserve(corpus.size());
  for (const auto &r : corpus.records()) docs.push_back(run_pipeline(r.text, pipe, stemmer));
  return docs;
}

TrainedModel fit_model(ModelKind kind, const std::vector<TokenSeq> &docs, const std::vector<Sentiment> &labels,
                       const RunConfig &cfg, const Resources &res, std::vector<EpochLog> *epochs) {
  if (docs.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "documents and labels differ in count");
  if (docs.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training documents");
  TrainedModel m;
  m.kind = kind;
  m.max_tokens = cfg.max_tokens;
  m.stages = cfg.stages;
  m.fingerprint = res.fingerprint();
  m.seed = cfg.seed;
  m.hyper = hyper_json(kind, cfg);

  if (kind == ModelKind::Lstm) {
    std::vector<std::size_t> fit_idx, val_idx;
    if (cfg.split.val_ratio > 0.0) {
      std::vector<Review> stub;
      stub.reserve(labels.size());
      for (auto s : labels) stub.push_back({"", s});
      const LabeledCorpus label_corpus(std::move(stub));
      auto split = stratified_split_indices(label_corpus, {1.0 - cfg.split.val_ratio, cfg.seed, cfg.split.k});
      fit_idx = std::move(split.train);
      val_idx = std::move(split.test);
    } else {
      for (std::size_t i = 0; i < docs.size(); ++i) fit_idx.push_back(i);
    }
    const auto fit_docs = pick(docs, fit_idx);
    m.lstm_vocab = build_vocab(fit_docs, cfg.features.min_freq);
    m.seq_len = cfg.max_tokens;
    for (std::size_t i : fit_idx) ++m.train_counts[index_of(labels[i])];

    auto encode = [&](std::span<const std::size_t> idx) {
      std::vector<LstmExample> out;
      out.reserve(idx.size());
      for (std::size_t i : idx) out.push_back({encode_seq(docs[i], m.lstm_vocab, m.seq_len), index_of(labels[i])});
      return out;
    };
    const auto train_set = encode(fit_idx);
    const auto val_set = encode(val_idx);
    const LstmShape shape{m.lstm_vocab.size(), cfg.lstm.embed_dim, cfg.lstm.hidden, kNumClasses};
    Rng init_rng(cfg.seed, kInitStream);
    LstmTrainConfig tc = cfg.lstm.train;
    tc.seed = cfg.seed;
    auto result = train_lstm(train_set, val_set, init_params(shape, init_rng), tc);
    m.lstm = std::move(result.params);
    m.hyper["lstm_fit_size"] = fit_idx.size();
    m.hyper["lstm_val_size"] = val_idx.size();
    m.hyper["lstm_skipped_empty"] = result.skipped_empty;
    if (epochs) *epochs = std::move(result.log);
    return m;
  }

  m.tfidf = fit_tfidf(docs, cfg.features.min_freq, cfg.features.idf);
  std::vector<SparseVector> X;
  X.reserve(docs.size());
  for (const auto &d : docs) X.push_back(vectorize_tfidf(d, m.tfidf));
  const std::size_t dim = m.tfidf.dim();
  switch (kind) {
    case ModelKind::Nb: m.nb = train_nb(X, labels, cfg.nb.alpha, cfg.nb.balanced); break;
    case ModelKind::Lr: {
      LrConfig lc = cfg.lr;
      lc.seed = cfg.seed;
      m.lr = train_lr(X, labels, dim, lc);
      break;
    }
    case ModelKind::Rf: {
      RfConfig rc = cfg.rf;
      rc.seed = cfg.seed;
      m.rf = train_rf(X, labels, dim, rc);
      break;
    }
    case ModelKind::Lstm: break;
  }
  return m;
}

Evaluation evaluate(const TrainedModel &model, const std::vector<TokenSeq> &docs, const std::vector<Sentiment> &labels) {
  Evaluation ev;
  std::vector<std::size_t> truth, pred;
  truth.reserve(docs.size());
  pred.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto out = predict_tokens(model, docs[i]);
    if (out.degenerate) ++ev.degenerate;
    truth.push_back(index_of(labels[i]));
    pred.push_back(index_of(out.prediction.label));
  }
  ev.confusion = confusion(truth, pred, kNumClasses);
  ev.metrics = metrics(ev.confusion);
  return ev;
}

json report_json(const std::string &name, const Evaluation &ev) {
  const auto &m = ev.metrics;
  json per_class = json::object();
  for (std::size_t c = 0; c < m.per_class.size(); ++c) {
    const auto &k = m.per_class[c];
    per_class[label_names()[c]] = {{"precision", k.precision},
                                   {"recall", k.recall},
                                   {"f1", k.f1},
                                   {"support", k.support},
                                   {"predicted", k.predicted},
                                   {"precision_undefined", k.precision_undefined},
                                   {"recall_undefined", k.recall_undefined},
                                   {"f1_undefined", k.f1_undefined}};
  }
  json cm = json::array();
  for (std::size_t i = 0; i < ev.confusion.classes(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < ev.confusion.classes(); ++j) row.push_back(ev.confusion(i, j));
    cm.push_back(row);
  }
  return {{"model", name},
          {"n", m.total},
          {"accuracy", m.accuracy},
          {"weighted", {{"precision", m.weighted_precision}, {"recall", m.weighted_recall}, {"f1", m.weighted_f1}}},
          {"macro", {{"precision", m.macro_precision}, {"recall", m.macro_recall}, {"f1", m.macro_f1}}},
          {"per_class", per_class},
          {"labels", label_names()},
          {"confusion", cm},
          {"any_undefined", m.any_undefined},
          {"degenerate_inputs", ev.degenerate}};
}

std::string confusion_csv(const ConfusionMatrix &cm) { return cm.to_csv(label_names()); }

json stats_json(const LabeledCorpus &corpus) {
  const auto dist = class_distribution(corpus);
  json classes = json::object();
  for (std::size_t c = 0; c < kNumClasses; ++c)
    classes[label_names()[c]] = {{"count", dist[c].count}, {"percent", round_to(dist[c].percent, 2)}};
  return {{"n", corpus.size()}, {"classes", classes}};
}

std::string stats_text(const LabeledCorpus &corpus) {
  const auto dist = class_distribution(corpus);
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-10s %8s %8s\n", "sentiment", "count", "percent");
  out << buf;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::snprintf(buf, sizeof buf, "%-10s %8zu %8.2f\n", label_names()[c].c_str(), dist[c].count,
                  round_to(dist[c].percent, 2));
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-10s %8zu %8.2f\n", "total", corpus.size(), 100.0);
  out << buf;
  return out.str();
}

LabeledCorpus load_dataset(const RunConfig &cfg) { return load_csv(cfg.dataset_path(), cfg.dataset.csv); }

json cmd_stats(const RunConfig &cfg) {
  const auto corpus = load_dataset(cfg);
  json j = stats_json(corpus);
  j["text"] = stats_text(corpus);
  return j;
}

std::size_t cmd_preprocess(const RunConfig &cfg, const std::filesystem::path &in, const std::filesystem::path &out) {
  const auto res = load_resources(cfg.resources);
  const auto pipe = make_pipeline(cfg.max_tokens, cfg.stages, res);
  const auto corpus = load_csv(in, cfg.dataset.csv);
  std::string lines;
  for (const auto &r : corpus.records()) {
    lines += json(run_pipeline(r.text, pipe, cfg.stages.stem ? res.stemmer.get() : nullptr)).dump();
    lines += '\n';
  }
  write_file_atomic(out, lines);
  return corpus.size();
}

namespace {

struct Prepared {
  LabeledCorpus corpus;
  Resources res;
  std::vector<TokenSeq> docs;
  std::vector<Sentiment> labels;
};

Prepared prepare(const RunConfig &cfg) {
  Prepared p;
  p.corpus = load_dataset(cfg);
  p.res = load_resources(cfg.resources);
  const auto pipe = make_pipeline(cfg.max_tokens, cfg.stages, p.res);
  p.docs = preprocess_all(p.corpus, pipe, cfg.stages.stem ? p.res.stemmer.get() : nullptr);
  p.labels = p.corpus.labels();
  return p;
}

// Fits, evaluates and writes model, report, confusion CSV and (LSTM) epoch log.
struct Trained {
  json summary;
  MetricSet metrics;
};

Trained train_and_write(ModelKind kind, const Prepared &p, const SplitIndices &split, const RunConfig &cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<EpochLog> epochs;
  const auto model = fit_model(kind, pick(p.docs, split.train), pick(p.labels, split.train), cfg, p.res, &epochs);
  const double train_seconds = seconds_since(t0);
  const auto ev = evaluate(model, pick(p.docs, split.test), pick(p.labels, split.test));

  const std::filesystem::path out = cfg.out_dir;
  const std::string name = to_string(kind);
  save_model(out / (name + ".skm"), model);
  write_file_atomic(out / (name + "_report.json"), report_json(name, ev).dump(2) + "\n");
  write_file_atomic(out / (name + "_confusion.csv"), confusion_csv(ev.confusion));
  json files = {(out / (name + ".skm")).string(), (out / (name + "_report.json")).string(),
                (out / (name + "_confusion.csv")).string()};
  if (kind == ModelKind::Lstm) {
    write_file_atomic(out / "lstm_epochs.csv", epoch_log_csv(epochs));
    files.push_back((out / "lstm_epochs.csv").string());
  } else {
    write_file_atomic(out / (name + "_vocab.tsv"), model.tfidf.vocab.to_tsv());
    files.push_back((out / (name + "_vocab.tsv")).string());
  }
  json summary = report_json(name, ev);
  summary["n_train"] = split.train.size();
  summary["n_test"] = split.test.size();
  summary["train_seconds"] = train_seconds;
  summary["files"] = files;
  if (kind == ModelKind::Lstm) {
    json log = json::array();
    for (const auto &e : epochs)
      log.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"val_loss", e.val_loss},
                     {"train_acc", e.train_acc}, {"val_acc", e.val_acc}});
    summary["epochs"] = log;
  }
  return {summary, ev.metrics};
}

}  // namespace

json cmd_train(const RunConfig &cfg, ModelKind kind) {
  cfg.validate();
  const Prepared p = prepare(cfg);
  const auto split = stratified_split_indices(p.corpus, {cfg.split.train_ratio, cfg.seed, cfg.split.k});
  try {
    return train_and_write(kind, p, split, cfg).summary;
  } catch (const Error &e) {
    if (e.code() == ErrorCode::Io || e.code() == ErrorCode::TrainingFailed) throw;
    throw Error(ErrorCode::TrainingFailed, std::string(to_string(kind)) + " training failed: " + e.what());
  }
}

json cmd_compare(const RunConfig &cfg, const std::vector<ModelKind> &kinds, std::size_t cv) {
  cfg.validate();
  if (kinds.empty()) throw Error(ErrorCode::InvalidArgument, "no models selected");
  if (cv == 1) throw Error(ErrorCode::InvalidArgument, "--cv needs k >= 2");
  const Prepared p = prepare(cfg);
  const std::filesystem::path out = cfg.out_dir;
  json summary;
  std::size_t succeeded = 0;

  if (cv == 0) {
    const auto split = stratified_split_indices(p.corpus, {cfg.split.train_ratio, cfg.seed, cfg.split.k});
    std::vector<LeaderboardRow> rows;
    json models = json::array();
    for (ModelKind kind : kinds) {
      LeaderboardRow row;
      row.name = to_string(kind);
      try {
        auto t = train_and_write(kind, p, split, cfg);
        row.metrics = t.metrics;
        models.push_back(std::move(t.summary));
        ++succeeded;
      } catch (const std::exception &e) {
        row.error = e.what();
        models.push_back({{"model", row.name}, {"error", row.error}});
      }
      rows.push_back(std::move(row));
    }
    rows = compare(std::move(rows));
    const std::string text = leaderboard_text(rows);
    write_file_atomic(out / "leaderboard.csv", leaderboard_csv(rows));
    write_file_atomic(out / "leaderboard.txt", text);
    summary = {{"mode", "holdout"}, {"n_train", split.train.size()}, {"n_test", split.test.size()},
               {"models", models}, {"text", text}};
  } else {
    const auto folds = stratified_kfold(p.corpus, {cfg.split.train_ratio, cfg.seed, cv});
    std::string csv = "model,folds,accuracy_mean,accuracy_std,precision_mean,precision_std,recall_mean,recall_std,"
                      "f1_mean,f1_std,macro_f1_mean,macro_f1_std,status\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-6s  %-17s  %-17s  %-17s  %-17s\n", "Model", "Accuracy", "Precision", "Recall",
                  "F1-score");
    std::string text = buf;
    json models = json::array();
    for (ModelKind kind : kinds) {
      const std::string name = to_string(kind);
      try {
        std::vector<MetricSet> per_fold;
        for (const auto &fold : folds) {
          const auto model = fit_model(kind, pick(p.docs, fold.train), pick(p.labels, fold.train), cfg, p.res);
          per_fold.push_back(evaluate(model, pick(p.docs, fold.test), pick(p.labels, fold.test)).metrics);
        }
        const auto s = cv_aggregate(per_fold);
        auto pm = [](const MeanStd &v) { return fmt("%.4f", v.mean) + " ± " + fmt("%.4f", v.std); };
        auto cell = [](const MeanStd &v) { return fmt("%.4f", v.mean) + "," + fmt("%.4f", v.std); };
        csv += name + "," + std::to_string(s.folds) + "," + cell(s.accuracy) + "," + cell(s.weighted_precision) + "," +
               cell(s.weighted_recall) + "," + cell(s.weighted_f1) + "," + cell(s.macro_f1) + ",ok\n";
        std::snprintf(buf, sizeof buf, "%-6s  %-17s  %-17s  %-17s  %-17s\n", name.c_str(), pm(s.accuracy).c_str(),
                      pm(s.weighted_precision).c_str(), pm(s.weighted_recall).c_str(), pm(s.weighted_f1).c_str());
        text += buf;
        json fold_acc = json::array();
        for (const auto &m : per_fold) fold_acc.push_back(m.accuracy);
        models.push_back({{"model", name},
                          {"folds", s.folds},
                          {"fold_accuracy", fold_acc},
                          {"accuracy", {{"mean", s.accuracy.mean}, {"std", s.accuracy.std}}},
                          {"weighted_f1", {{"mean", s.weighted_f1.mean}, {"std", s.weighted_f1.std}}}});
        ++succeeded;
      } catch (const std::exception &e) {
        csv += name + ",,,,,,,,,,,,failed\n";
        text += name + "  failed: " + e.what() + "\n";
        models.push_back({{"model", name}, {"error", e.what()}});
      }
    }
    write_file_atomic(out / "cv_summary.csv", csv);
    write_file_atomic(out / "cv_summary.txt", text);
    summary = {{"mode", "cv"}, {"k", cv}, {"models", models}, {"text", text}};
  }
  if (succeeded == 0) throw Error(ErrorCode::TrainingFailed, "every model failed to train");
  return summary;
}

Predictor::Predictor(const std::filesystem::path &model_path, const std::filesystem::path &resource_dir)
    : model_(load_model(model_path)), resources_(load_resources(resource_dir)) {
  if (resources_.fingerprint() != model_.fingerprint)
    throw Error(ErrorCode::FingerprintMismatch,
                "model was trained with different pipeline resources (fingerprint " + model_.fingerprint.substr(0, 12) +
                    " vs " + resources_.fingerprint().substr(0, 12) + ")");
  pipe_ = make_pipeline(model_.max_tokens, model_.stages, resources_);
}

ModelOutput Predictor::predict(std::string_view text) const {
  const auto tokens = run_pipeline(text, pipe_, model_.stages.stem ? resources_.stemmer.get() : nullptr);
  return predict_tokens(model_, tokens);
}

}  // namespace sentikit
