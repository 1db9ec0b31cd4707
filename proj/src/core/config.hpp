#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "classifiers.hpp"
#include "corpus.hpp"
#include "features.hpp"
#include "json.hpp"
#include "lstm.hpp"
#include "preprocess.hpp"

namespace sentikit {

struct DatasetConfig {
  std::string path;  // empty falls back to $SENTIKIT_DATA
  CsvOptions csv;
};

struct FeatureConfig {
  std::size_t min_freq = 2;
  IdfForm idf = IdfForm::AddOne;
};

struct NbConfig {
  double alpha = 1.0;
  bool balanced = false;
};

struct LstmConfig {
  std::size_t embed_dim = 64;
  std::size_t hidden = 64;
  LstmTrainConfig train;
};

struct SplitConfig {
  double train_ratio = 0.8;
  std::size_t k = 5;
  // share of the training split held out for LSTM validation curves
  double val_ratio = 0.1;
};

// Defaults: 80:20 split, 5 folds, 100 tokens,
// LSTM d=h=64, lr 0.001, batch 32, 20 epochs, dropout 0.3.
struct RunConfig {
  DatasetConfig dataset;
  std::string resources;  // empty: $SENTIKIT_RESOURCES, then the bundled data dir
  std::size_t max_tokens = 100;
  StageFlags stages;
  FeatureConfig features;
  NbConfig nb;
  LrConfig lr;
  RfConfig rf;
  LstmConfig lstm;
  SplitConfig split;
  std::uint64_t seed = 42;
  std::string out_dir = "out";

  void validate() const;
  std::filesystem::path dataset_path() const;
};

nlohmann::json to_json(const RunConfig &cfg);
// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json &j);
RunConfig load_config(const std::filesystem::path &path);
// Sets one dotted key ("lstm.epochs") from a JSON literal or a bare string.
void set_config_value(RunConfig &cfg, const std::string &key, const std::string &value);

}  // namespace sentikit
