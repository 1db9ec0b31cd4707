#include "sentikit/sentikit.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "app.hpp"
#include "config.hpp"
#include "error.hpp"
#include "json.hpp"
#include "resources.hpp"

using namespace sentikit;

struct sk_config {
  RunConfig cfg;
};

struct sk_model {
  Predictor predictor;
};

namespace {

thread_local std::string g_last_error;

sk_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return SK_ERR_USAGE;
    case ErrorCode::FileNotFound:
    case ErrorCode::BadEncoding:
    case ErrorCode::MissingColumn:
    case ErrorCode::UnknownLabel:
    case ErrorCode::EmptyText:
    case ErrorCode::EmptyCorpus:
    case ErrorCode::EmptyClass:
    case ErrorCode::FoldTooLarge:
    case ErrorCode::BadModelFile:
      return SK_ERR_DATA;
    case ErrorCode::EmptyTrainingSet:
    case ErrorCode::ZeroDf:
    case ErrorCode::MissingClass:
    case ErrorCode::DimMismatch:
    case ErrorCode::EmptySequence:
    case ErrorCode::LengthMismatch:
    case ErrorCode::Empty:
    case ErrorCode::EmptyMatrix:
    case ErrorCode::TooFewFolds:
    case ErrorCode::TrainingFailed:
      return SK_ERR_TRAIN;
    case ErrorCode::FingerprintMismatch:
      return SK_ERR_MODEL;
    case ErrorCode::Io:
      return SK_ERR_INTERNAL;
  }
  return SK_ERR_INTERNAL;
}

template <typename F>
sk_status guarded(F &&body) {
  try {
    body();
    g_last_error.clear();
    return SK_OK;
  } catch (const RowError &e) {
    g_last_error = std::string(error_code_name(e.code())) + " at data row " + std::to_string(e.row()) + ": " + e.what();
    return status_for(e.code());
  } catch (const Error &e) {
    g_last_error = std::string(error_code_name(e.code())) + ": " + e.what();
    return status_for(e.code());
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
    return SK_ERR_INTERNAL;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return SK_ERR_INTERNAL;
  }
}

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sk_status null_arg(const char *what) {
  g_last_error = std::string("InvalidArgument: ") + what + " must not be NULL";
  return SK_ERR_USAGE;
}

std::vector<ModelKind> parse_kinds(const char *csv) {
  std::vector<ModelKind> kinds;
  if (!csv || !*csv) return {ModelKind::Nb, ModelKind::Lr, ModelKind::Rf, ModelKind::Lstm};
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const ModelKind k = parse_model_kind(item);
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  }
  if (kinds.empty()) throw Error(ErrorCode::InvalidArgument, "empty model list");
  return kinds;
}

}  // namespace

extern "C" {

const char *sk_version(void) { return "1.0.0"; }

const char *sk_last_error(void) { return g_last_error.c_str(); }

void sk_string_free(char *s) { std::free(s); }

const char *sk_label_name(int label) {
  if (label < 0 || label >= static_cast<int>(kNumClasses)) return "unknown";
  return to_string(static_cast<Sentiment>(label));
}

sk_status sk_config_new(sk_config **out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new sk_config{}; });
}

sk_status sk_config_load(const char *path, sk_config **out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new sk_config{load_config(path)}; });
}

sk_status sk_config_set(sk_config *cfg, const char *key, const char *value) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guarded([&] { set_config_value(cfg->cfg, key, value); });
}

sk_status sk_config_to_json(const sk_config *cfg, char **out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] { *out = dup_string(to_json(cfg->cfg).dump(2)); });
}

void sk_config_free(sk_config *cfg) { delete cfg; }

sk_status sk_stats(const sk_config *cfg, int as_json, char **out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto j = cmd_stats(cfg->cfg);
    const std::string text = j["text"].get<std::string>();
    j.erase("text");
    *out = dup_string(as_json ? j.dump(2) + "\n" : text);
  });
}

sk_status sk_preprocess_file(const sk_config *cfg, const char *in_csv, const char *out_jsonl, size_t *records) {
  if (!cfg) return null_arg("cfg");
  if (!in_csv) return null_arg("in_csv");
  if (!out_jsonl) return null_arg("out_jsonl");
  return guarded([&] {
    const std::size_t n = cmd_preprocess(cfg->cfg, in_csv, out_jsonl);
    if (records) *records = n;
  });
}

sk_status sk_preprocess_text(const sk_config *cfg, const char *text, char **out) {
  if (!cfg) return null_arg("cfg");
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto res = load_resources(cfg->cfg.resources);
    const auto pipe = make_pipeline(cfg->cfg.max_tokens, cfg->cfg.stages, res);
    *out = dup_string(nlohmann::json(run_pipeline(text, pipe, cfg->cfg.stages.stem ? res.stemmer.get() : nullptr)).dump());
  });
}

sk_status sk_stem(const sk_config *cfg, const char *word, int trace, char **out) {
  if (!cfg) return null_arg("cfg");
  if (!word) return null_arg("word");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto res = load_resources(cfg->cfg.resources);
    if (!trace) {
      *out = dup_string(res.stemmer->stem(word));
      return;
    }
    const StemTrace t = res.stemmer->trace(word);
    std::string s = t.input + "\n";
    for (const auto &step : t.steps) s += "  " + step.rule + " -> " + step.form + "\n";
    s += "= " + t.output;
    *out = dup_string(s);
  });
}

sk_status sk_train(const sk_config *cfg, const char *model, char **out) {
  if (!cfg) return null_arg("cfg");
  if (!model) return null_arg("model");
  return guarded([&] {
    const auto summary = cmd_train(cfg->cfg, parse_model_kind(model));
    if (out) *out = dup_string(summary.dump(2));
  });
}

sk_status sk_compare(const sk_config *cfg, const char *models_csv, size_t cv, char **out) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    const auto summary = cmd_compare(cfg->cfg, parse_kinds(models_csv), cv);
    if (out) *out = dup_string(summary.dump(2));
  });
}

sk_status sk_model_load(const char *path, const char *resource_dir, sk_model **out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new sk_model{Predictor(path, resource_dir ? resource_dir : "")}; });
}

sk_status sk_model_predict(const sk_model *model, const char *text, sk_prediction *out) {
  if (!model) return null_arg("model");
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guarded([&] {
    const auto r = model->predictor.predict(text);
    out->label = static_cast<int>(index_of(r.prediction.label));
    for (std::size_t c = 0; c < kNumClasses; ++c) out->probs[c] = r.prediction.probs[c];
    out->degenerate = r.degenerate ? 1 : 0;
  });
}

const char *sk_model_kind(const sk_model *model) {
  return model ? to_string(model->predictor.model().kind) : "unknown";
}

void sk_model_free(sk_model *model) { delete model; }

}  // extern "C"
