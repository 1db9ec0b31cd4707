#include "config.hpp"

#include <cmath>
#include <cstdlib>

#include "error.hpp"
#include "fileio.hpp"

namespace sentikit {

using nlohmann::json;

namespace {

const char *idf_name(IdfForm f) { return f == IdfForm::AddOne ? "add_one" : "smoothed_denominator"; }

IdfForm parse_idf(const std::string &s) {
  if (s == "add_one") return IdfForm::AddOne;
  if (s == "smoothed_denominator") return IdfForm::SmoothedDenominator;
  throw Error(ErrorCode::InvalidArgument, "features.idf must be add_one or smoothed_denominator, got '" + s + "'");
}

std::string delimiter_string(char c) { return std::string(1, c); }

// Overlays `patch` onto `base`; every patch key must already exist in base.
void overlay(json &base, const json &patch, const std::string &where) {
  if (!patch.is_object())
    throw Error(ErrorCode::InvalidArgument, "config " + (where.empty() ? std::string("root") : where) + " must be an object");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    const std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!base.contains(it.key())) throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    json &slot = base[it.key()];
    if (slot.is_object())
      overlay(slot, it.value(), key);
    else
      slot = it.value();
  }
}

template <typename T>
T get(const json &j, const char *key, const std::string &where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &) {
    throw Error(ErrorCode::InvalidArgument, "config key '" + where + key + "' has the wrong type");
  }
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string &m) { throw Error(ErrorCode::InvalidArgument, m); };
  PipelineConfig p;
  p.max_tokens = max_tokens;
  p.validate();
  if (features.min_freq < 1) fail("features.min_freq must be >= 1");
  if (!(nb.alpha > 0.0)) fail("nb.alpha must be > 0");
  if (!(lr.lr > 0.0)) fail("lr.lr must be > 0");
  if (lr.batch < 1) fail("lr.batch must be >= 1");
  if (lr.l2 < 0.0) fail("lr.l2 must be >= 0");
  if (rf.n_trees < 1) fail("rf.n_trees must be >= 1");
  if (lstm.embed_dim < 1 || lstm.hidden < 1) fail("lstm.embed_dim and lstm.hidden must be >= 1");
  if (!(lstm.train.adam.lr > 0.0)) fail("lstm.lr must be > 0");
  if (lstm.train.batch < 1) fail("lstm.batch must be >= 1");
  if (!(lstm.train.dropout >= 0.0 && lstm.train.dropout < 1.0)) fail("lstm.dropout must be in [0, 1)");
  if (lstm.train.clip_norm < 0.0) fail("lstm.clip_norm must be >= 0");
  if (!(split.train_ratio > 0.0 && split.train_ratio < 1.0)) fail("split.train_ratio must be in (0, 1)");
  if (split.k < 2) fail("split.k must be >= 2");
  if (!(split.val_ratio >= 0.0 && split.val_ratio < 1.0)) fail("split.val_ratio must be in [0, 1)");
  if (dataset.csv.text_col.empty() || dataset.csv.label_col.empty()) fail("dataset column names must be non-empty");
}

std::filesystem::path RunConfig::dataset_path() const {
  if (!dataset.path.empty()) return dataset.path;
  if (const char *env = std::getenv("SENTIKIT_DATA"); env && *env) return env;
  throw Error(ErrorCode::FileNotFound, "no dataset path: set dataset.path in the config or SENTIKIT_DATA");
}

json to_json(const RunConfig &c) {
  json j;
  j["dataset"] = {{"path", c.dataset.path},
                  {"delimiter", delimiter_string(c.dataset.csv.delimiter)},
                  {"text_col", c.dataset.csv.text_col},
                  {"label_col", c.dataset.csv.label_col},
                  {"skip_empty", c.dataset.csv.skip_empty}};
  j["resources"] = c.resources;
  j["pipeline"] = {{"max_tokens", c.max_tokens},
                   {"stages",
                    {{"case_fold", c.stages.case_fold},
                     {"clean", c.stages.clean},
                     {"normalize_slang", c.stages.normalize_slang},
                     {"remove_stopwords", c.stages.remove_stopwords},
                     {"stem", c.stages.stem},
                     {"truncate", c.stages.truncate}}}};
  j["features"] = {{"min_freq", c.features.min_freq}, {"idf", idf_name(c.features.idf)}};
  j["nb"] = {{"alpha", c.nb.alpha}, {"balanced", c.nb.balanced}};
  j["lr"] = {{"lr", c.lr.lr},       {"epochs", c.lr.epochs}, {"batch", c.lr.batch},
             {"l2", c.lr.l2},       {"tol", c.lr.tol},       {"balanced", c.lr.balanced}};
  j["rf"] = {{"n_trees", c.rf.n_trees},
             {"max_depth", c.rf.max_depth},
             {"features_per_split", c.rf.features_per_split},
             {"bootstrap", c.rf.bootstrap},
             {"balanced", c.rf.balanced}};
  const auto &t = c.lstm.train;
  j["lstm"] = {{"embed_dim", c.lstm.embed_dim}, {"hidden", c.lstm.hidden}, {"lr", t.adam.lr},
               {"beta1", t.adam.beta1},         {"beta2", t.adam.beta2},   {"eps", t.adam.eps},
               {"batch", t.batch},              {"epochs", t.epochs},      {"dropout", t.dropout},
               {"clip_norm", t.clip_norm}};
  j["split"] = {{"train_ratio", c.split.train_ratio}, {"k", c.split.k}, {"val_ratio", c.split.val_ratio}};
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  return j;
}

RunConfig config_from_json(const json &patch) {
  json j = to_json(RunConfig{});
  overlay(j, patch, "");

  RunConfig c;
  const auto &d = j["dataset"];
  c.dataset.path = get<std::string>(d, "path", "dataset.");
  const auto delim = get<std::string>(d, "delimiter", "dataset.");
  if (delim.size() != 1) throw Error(ErrorCode::InvalidArgument, "dataset.delimiter must be one character");
  c.dataset.csv.delimiter = delim[0];
  c.dataset.csv.text_col = get<std::string>(d, "text_col", "dataset.");
  c.dataset.csv.label_col = get<std::string>(d, "label_col", "dataset.");
  c.dataset.csv.skip_empty = get<bool>(d, "skip_empty", "dataset.");
  c.resources = get<std::string>(j, "resources", "");

  const auto &p = j["pipeline"];
  c.max_tokens = get<std::size_t>(p, "max_tokens", "pipeline.");
  const auto &s = p["stages"];
  c.stages.case_fold = get<bool>(s, "case_fold", "pipeline.stages.");
  c.stages.clean = get<bool>(s, "clean", "pipeline.stages.");
  c.stages.normalize_slang = get<bool>(s, "normalize_slang", "pipeline.stages.");
  c.stages.remove_stopwords = get<bool>(s, "remove_stopwords", "pipeline.stages.");
  c.stages.stem = get<bool>(s, "stem", "pipeline.stages.");
  c.stages.truncate = get<bool>(s, "truncate", "pipeline.stages.");

  c.features.min_freq = get<std::size_t>(j["features"], "min_freq", "features.");
  c.features.idf = parse_idf(get<std::string>(j["features"], "idf", "features."));

  c.nb.alpha = get<double>(j["nb"], "alpha", "nb.");
  c.nb.balanced = get<bool>(j["nb"], "balanced", "nb.");

  const auto &l = j["lr"];
  c.lr.lr = get<double>(l, "lr", "lr.");
  c.lr.epochs = get<std::size_t>(l, "epochs", "lr.");
  c.lr.batch = get<std::size_t>(l, "batch", "lr.");
  c.lr.l2 = get<double>(l, "l2", "lr.");
  c.lr.tol = get<double>(l, "tol", "lr.");
  c.lr.balanced = get<bool>(l, "balanced", "lr.");

  const auto &r = j["rf"];
  c.rf.n_trees = get<std::size_t>(r, "n_trees", "rf.");
  c.rf.max_depth = get<std::size_t>(r, "max_depth", "rf.");
  c.rf.features_per_split = get<std::size_t>(r, "features_per_split", "rf.");
  c.rf.bootstrap = get<bool>(r, "bootstrap", "rf.");
  c.rf.balanced = get<bool>(r, "balanced", "rf.");

  const auto &m = j["lstm"];
  c.lstm.embed_dim = get<std::size_t>(m, "embed_dim", "lstm.");
  c.lstm.hidden = get<std::size_t>(m, "hidden", "lstm.");
  c.lstm.train.adam.lr = get<double>(m, "lr", "lstm.");
  c.lstm.train.adam.beta1 = get<double>(m, "beta1", "lstm.");
  c.lstm.train.adam.beta2 = get<double>(m, "beta2", "lstm.");
  c.lstm.train.adam.eps = get<double>(m, "eps", "lstm.");
  c.lstm.train.batch = get<std::size_t>(m, "batch", "lstm.");
  c.lstm.train.epochs = get<std::size_t>(m, "epochs", "lstm.");
  c.lstm.train.dropout = get<double>(m, "dropout", "lstm.");
  c.lstm.train.clip_norm = get<double>(m, "clip_norm", "lstm.");

  c.split.train_ratio = get<double>(j["split"], "train_ratio", "split.");
  c.split.k = get<std::size_t>(j["split"], "k", "split.");
  c.split.val_ratio = get<double>(j["split"], "val_ratio", "split.");
  c.seed = get<std::uint64_t>(j, "seed", "");
  c.out_dir = get<std::string>(j, "out_dir", "");
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path &path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::InvalidArgument, "config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void set_config_value(RunConfig &cfg, const std::string &key, const std::string &value) {
  json current = to_json(cfg);
  json *slot = &current;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty() || !slot->is_object() || !slot->contains(part))
      throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    slot = &(*slot)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (slot->is_object()) throw Error(ErrorCode::InvalidArgument, "config key '" + key + "' is a section");
  if (slot->is_string()) {
    *slot = value;
  } else {
    try {
      *slot = json::parse(value);
    } catch (const json::parse_error &) {
      throw Error(ErrorCode::InvalidArgument, "config key '" + key + "' needs a JSON value, got '" + value + "'");
    }
  }
  cfg = config_from_json(current);
}

}  // namespace sentikit
