#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "app.hpp"
#include "config.hpp"
#include "doctest.h"
#include "error.hpp"
#include "fileio.hpp"
#include "model.hpp"
#include "resources.hpp"

using namespace sentikit;
namespace fs = std::filesystem;

namespace {

const std::string kData = SENTIKIT_TEST_DATA_DIR;

const Resources &resources() {
  static const Resources res = load_resources(kData);
  return res;
}

RunConfig small_config() {
  RunConfig cfg;
  cfg.resources = kData;
  cfg.rf.n_trees = 5;
  cfg.lr.epochs = 20;
  cfg.lstm.embed_dim = 8;
  cfg.lstm.hidden = 8;
  cfg.lstm.train.epochs = 1;
  return cfg;
}

struct Small {
  std::vector<TokenSeq> docs;
  std::vector<Sentiment> labels;
};

const Small &small_data() {
  static const Small s = [] {
    const auto corpus = load_csv(kData + "/standin_reviews.csv");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < 600; ++i) idx.push_back(i);
    const auto sub = corpus.subset(idx);
    const auto cfg = small_config();
    const auto pipe = make_pipeline(cfg.max_tokens, cfg.stages, resources());
    return Small{preprocess_all(sub, pipe, resources().stemmer.get()), sub.labels()};
  }();
  return s;
}

fs::path temp_dir(const std::string &name) {
  const auto dir = fs::temp_directory_path() / ("sentikit_model_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorCode code_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("model kinds") {
  CHECK(parse_model_kind("nb") == ModelKind::Nb);
  CHECK(parse_model_kind("lstm") == ModelKind::Lstm);
  CHECK(std::string(to_string(ModelKind::Rf)) == "rf");
  CHECK_THROWS_AS(parse_model_kind("svm"), Error);
}

TEST_CASE("save, load and predict round trip for every kind") {
  const auto &data = small_data();
  const auto cfg = small_config();
  const std::vector<std::string> probes{"game bagus banget", "lag parah", "", "zzzz qqqq", "biasa aja sih"};
  for (ModelKind kind : {ModelKind::Nb, ModelKind::Lr, ModelKind::Rf, ModelKind::Lstm}) {
    CAPTURE(to_string(kind));
    const auto model = fit_model(kind, data.docs, data.labels, cfg, resources());
    const auto bytes = serialize_model(model);
    CHECK(bytes.rfind("SENTIKIT", 0) == 0);
    const auto loaded = deserialize_model(bytes);
    CHECK(serialize_model(loaded) == bytes);
    CHECK(loaded.kind == kind);
    CHECK(loaded.fingerprint == resources().fingerprint());

    const auto pipe = make_pipeline(cfg.max_tokens, cfg.stages, resources());
    for (const auto &text : probes) {
      const auto toks = run_pipeline(text, pipe, resources().stemmer.get());
      const auto a = predict_tokens(model, toks);
      const auto b = predict_tokens(loaded, toks);
      CHECK(a.prediction.label == b.prediction.label);
      CHECK(a.prediction.probs == b.prediction.probs);
      CHECK(a.degenerate == b.degenerate);
      CHECK(std::abs(a.prediction.probs[0] + a.prediction.probs[1] + a.prediction.probs[2] - 1.0) < 1e-9);
    }
    const auto empty = predict_tokens(model, {});
    CHECK(empty.degenerate);

    const auto dir = temp_dir(to_string(kind));
    save_model(dir / "m.skm", model);
    CHECK(serialize_model(load_model(dir / "m.skm")) == bytes);
    const Predictor pred(dir / "m.skm", kData);
    CHECK(pred.predict("game bagus banget").prediction.probs ==
          predict_tokens(model, run_pipeline("game bagus banget", pipe, resources().stemmer.get())).prediction.probs);
    fs::remove_all(dir);
  }
}

TEST_CASE("LSTM empty input falls back to the training prior") {
  const auto &data = small_data();
  const auto model = fit_model(ModelKind::Lstm, data.docs, data.labels, small_config(), resources());
  const auto out = predict_tokens(model, {});
  CHECK(out.degenerate);
  std::size_t n = 0;
  for (auto c : model.train_counts) n += c;
  for (std::size_t c = 0; c < kNumClasses; ++c)
    CHECK(out.prediction.probs[c] == doctest::Approx(static_cast<double>(model.train_counts[c]) / n));
}

TEST_CASE("corrupt model files are rejected") {
  const auto &data = small_data();
  const auto bytes = serialize_model(fit_model(ModelKind::Nb, data.docs, data.labels, small_config(), resources()));
  CHECK(code_of([&] { deserialize_model("garbage"); }) == ErrorCode::BadModelFile);
  CHECK(code_of([&] { deserialize_model(bytes.substr(0, bytes.size() / 2)); }) == ErrorCode::BadModelFile);
  CHECK(code_of([&] { deserialize_model(bytes + "x"); }) == ErrorCode::BadModelFile);
  std::string wrong_version = bytes;
  wrong_version[8] = 9;
  CHECK(code_of([&] { deserialize_model(wrong_version); }) == ErrorCode::BadModelFile);
  for (std::size_t cut = 0; cut < bytes.size(); cut += 97) {
    try {
      deserialize_model(bytes.substr(0, cut));
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::BadModelFile);
    }
  }
  CHECK(code_of([&] { load_model("/nonexistent/model.skm"); }) == ErrorCode::BadModelFile);
}

TEST_CASE("fingerprint mismatch is detected") {
  const auto &data = small_data();
  const auto dir = temp_dir("fingerprint");
  fs::create_directories(dir / "res");
  for (const char *f : {kSlangFile, kStopwordsIdFile, kStopwordsEnFile, kRootWordsFile})
    fs::copy_file(fs::path(kData) / f, dir / "res" / f);
  save_model(dir / "m.skm", fit_model(ModelKind::Lr, data.docs, data.labels, small_config(), resources()));
  CHECK_NOTHROW(Predictor(dir / "m.skm", dir / "res"));
  std::ofstream(dir / "res" / kSlangFile, std::ios::app) << "gmn\tbagaimana\n";
  CHECK(code_of([&] { Predictor(dir / "m.skm", dir / "res"); }) == ErrorCode::FingerprintMismatch);
  fs::remove_all(dir);
}

TEST_CASE("config defaults") {
  const RunConfig c;
  CHECK(c.split.train_ratio == 0.8);
  CHECK(c.split.k == 5);
  CHECK(c.max_tokens == 100);
  CHECK(c.lstm.embed_dim == 64);
  CHECK(c.lstm.hidden == 64);
  CHECK(c.lstm.train.adam.lr == 0.001);
  CHECK(c.lstm.train.batch == 32);
  CHECK(c.lstm.train.epochs == 20);
  CHECK(c.lstm.train.dropout == 0.3);
  CHECK(c.split.val_ratio == 0.1);
}

TEST_CASE("config parsing is strict") {
  using nlohmann::json;
  const auto c = config_from_json(json::parse(R"({"lstm": {"epochs": 3}, "seed": 7})"));
  CHECK(c.lstm.train.epochs == 3);
  CHECK(c.seed == 7);
  CHECK(c.lstm.hidden == 64);
  CHECK(code_of([&] { config_from_json(json::parse(R"({"lstm": {"epoch": 3}})")); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { config_from_json(json::parse(R"({"bogus": 1})")); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { config_from_json(json::parse(R"({"seed": "x"})")); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { config_from_json(json::parse(R"({"split": {"train_ratio": 0}})")); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { config_from_json(json::parse(R"({"lstm": {"dropout": 1.0}})")); }) ==
        ErrorCode::InvalidArgument);
  // to_json and back is the identity
  CHECK(to_json(config_from_json(to_json(c))) == to_json(c));
}

TEST_CASE("dotted config overrides") {
  RunConfig c;
  set_config_value(c, "lstm.epochs", "5");
  CHECK(c.lstm.train.epochs == 5);
  set_config_value(c, "out_dir", "somewhere");
  CHECK(c.out_dir == "somewhere");
  set_config_value(c, "features.idf", "smoothed_denominator");
  CHECK(c.features.idf == IdfForm::SmoothedDenominator);
  CHECK(code_of([&] { set_config_value(c, "lstm.nope", "1"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { set_config_value(c, "lstm", "1"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { set_config_value(c, "lstm.epochs", "many"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("config file loading") {
  const auto dir = temp_dir("config");
  write_file_atomic(dir / "c.json", R"({"rf": {"n_trees": 9}})");
  CHECK(load_config(dir / "c.json").rf.n_trees == 9);
  write_file_atomic(dir / "bad.json", "{not json");
  CHECK(code_of([&] { load_config(dir / "bad.json"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { load_config(dir / "missing.json"); }) == ErrorCode::FileNotFound);
  fs::remove_all(dir);
}

TEST_CASE("train command writes artifacts deterministically") {
  const auto dir = temp_dir("train");
  auto cfg = small_config();
  cfg.dataset.path = kData + "/standin_reviews.csv";
  cfg.out_dir = (dir / "a").string();
  const auto summary = cmd_train(cfg, ModelKind::Nb);
  CHECK(summary["n_test"].get<std::size_t>() == 2000);
  CHECK(fs::exists(dir / "a" / "nb.skm"));
  CHECK(fs::exists(dir / "a" / "nb_report.json"));
  CHECK(fs::exists(dir / "a" / "nb_confusion.csv"));
  cfg.out_dir = (dir / "b").string();
  cmd_train(cfg, ModelKind::Nb);
  CHECK(read_file(dir / "a" / "nb.skm") == read_file(dir / "b" / "nb.skm"));
  CHECK(read_file(dir / "a" / "nb_report.json") == read_file(dir / "b" / "nb_report.json"));

  // zero LR epochs is the uniform sanity path
  cfg.lr.epochs = 0;
  cfg.out_dir = (dir / "c").string();
  cmd_train(cfg, ModelKind::Lr);
  const Predictor p(dir / "c" / "lr.skm", kData);
  for (double v : p.predict("game bagus").prediction.probs) CHECK(v == doctest::Approx(1.0 / 3.0));
  fs::remove_all(dir);
}

TEST_CASE("stats report") {
  RunConfig cfg;
  cfg.dataset.path = kData + "/standin_reviews.csv";
  const auto j = cmd_stats(cfg);
  CHECK(j["n"].get<std::size_t>() == 10000);
  CHECK(j.contains("classes"));
  cfg.dataset.path = "/nonexistent.csv";
  CHECK(code_of([&] { cmd_stats(cfg); }) == ErrorCode::FileNotFound);
}
