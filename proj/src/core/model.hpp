#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "classifiers.hpp"
#include "features.hpp"
#include "json.hpp"
#include "lstm.hpp"
#include "preprocess.hpp"

namespace sentikit {

enum class ModelKind { Nb, Lr, Rf, Lstm };

const char *to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);  // nb | lr | rf | lstm

// A trained model plus everything prediction needs besides the bundled
// resources: pipeline settings, vocabulary, parameters.
struct TrainedModel {
  ModelKind kind = ModelKind::Lr;
  std::size_t max_tokens = 100;
  StageFlags stages;
  std::string fingerprint;  // resource fingerprint at train time
  std::uint64_t seed = 0;
  nlohmann::json hyper;  // hyperparameters, informational

  TfIdfModel tfidf;  // classical models
  NbModel nb;
  LrModel lr;
  RfModel rf;

  Vocabulary lstm_vocab;
  LstmParams lstm;
  std::size_t seq_len = 100;
  ClassCounts train_counts{};  // LSTM fallback prior for empty inputs
};

struct ModelOutput {
  Prediction prediction;
  bool degenerate = false;  // nothing left after preprocessing
};

ModelOutput predict_tokens(const TrainedModel &model, const TokenSeq &tokens);

// File layout (all integers little-endian):
//   "SENTIKIT"  u32 version
//   sections: 4-byte tag, u64 length, payload
//     META  JSON, keys sorted
//     VOCB  u32 count, then per term: u32 byte length, bytes, u32 df
//     PARM  model parameters as raw f64 / u32 values
inline constexpr std::uint32_t kModelFormatVersion = 1;

std::string serialize_model(const TrainedModel &model);
TrainedModel deserialize_model(std::string_view bytes);
void save_model(const std::filesystem::path &path, const TrainedModel &model);
TrainedModel load_model(const std::filesystem::path &path);

}  // namespace sentikit
