#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "corpus.hpp"
#include "eval.hpp"
#include "json.hpp"
#include "model.hpp"
#include "resources.hpp"

namespace sentikit {

PipelineConfig make_pipeline(std::size_t max_tokens, const StageFlags &stages, const Resources &res);

std::vector<TokenSeq> preprocess_all(const LabeledCorpus &corpus, const PipelineConfig &pipe, const Stemmer *stemmer);

// Trains one model on already preprocessed documents. For the LSTM a
// stratified val_ratio share of the documents is held out for the epoch log.
TrainedModel fit_model(ModelKind kind, const std::vector<TokenSeq> &docs, const std::vector<Sentiment> &labels,
                       const RunConfig &cfg, const Resources &res, std::vector<EpochLog> *epochs = nullptr);

struct Evaluation {
  ConfusionMatrix confusion{kNumClasses};
  MetricSet metrics;
  std::size_t degenerate = 0;
};

Evaluation evaluate(const TrainedModel &model, const std::vector<TokenSeq> &docs, const std::vector<Sentiment> &labels);

nlohmann::json report_json(const std::string &name, const Evaluation &ev);
std::string confusion_csv(const ConfusionMatrix &cm);

nlohmann::json stats_json(const LabeledCorpus &corpus);
std::string stats_text(const LabeledCorpus &corpus);

LabeledCorpus load_dataset(const RunConfig &cfg);

// Command bodies. Each writes its artifacts under cfg.out_dir and returns a
// JSON summary.
nlohmann::json cmd_stats(const RunConfig &cfg);
std::size_t cmd_preprocess(const RunConfig &cfg, const std::filesystem::path &in, const std::filesystem::path &out);
nlohmann::json cmd_train(const RunConfig &cfg, ModelKind kind);
// cv == 0 runs the held-out comparison; cv >= 2 runs stratified k-fold.
nlohmann::json cmd_compare(const RunConfig &cfg, const std::vector<ModelKind> &kinds, std::size_t cv);

class Predictor {
 public:
  // Throws FingerprintMismatch when the model was trained with different
  // resources than the ones found now.
  Predictor(const std::filesystem::path &model_path, const std::filesystem::path &resource_dir);

  ModelOutput predict(std::string_view text) const;
  const TrainedModel &model() const { return model_; }

 private:
  TrainedModel model_;
  Resources resources_;
  PipelineConfig pipe_;
};

}  // namespace sentikit
