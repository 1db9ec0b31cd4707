// sentikit command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sentikit/sentikit.h"

namespace {

struct ConfigDeleter {
  void operator()(sk_config *c) const { sk_config_free(c); }
};
struct ModelDeleter {
  void operator()(sk_model *m) const { sk_model_free(m); }
};
using ConfigPtr = std::unique_ptr<sk_config, ConfigDeleter>;
using ModelPtr = std::unique_ptr<sk_model, ModelDeleter>;

int fail(sk_status st) {
  std::cerr << "sentikit: " << sk_last_error() << "\n";
  return static_cast<int>(st);
}

// Takes ownership of a library string.
std::string take(char *s) {
  std::string out = s ? s : "";
  sk_string_free(s);
  return out;
}

struct Globals {
  std::string config;
  std::string seed;
  std::string out;
  std::string data;
  std::string resources;
  std::vector<std::string> sets;
  bool json = false;
};

int build_config(const Globals &g, ConfigPtr &cfg) {
  sk_config *raw = nullptr;
  const sk_status st = g.config.empty() ? sk_config_new(&raw) : sk_config_load(g.config.c_str(), &raw);
  if (st != SK_OK) return fail(st);
  cfg.reset(raw);
  auto set = [&](const char *key, const std::string &value) {
    return value.empty() ? SK_OK : sk_config_set(cfg.get(), key, value.c_str());
  };
  for (const auto &kv : g.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "sentikit: --set expects key=value, got '" << kv << "'\n";
      return SK_ERR_USAGE;
    }
    if (auto s = sk_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()); s != SK_OK)
      return fail(s);
  }
  for (auto [key, value] : {std::pair{"seed", g.seed}, std::pair{"out_dir", g.out}, std::pair{"dataset.path", g.data},
                            std::pair{"resources", g.resources}}) {
    if (auto s = set(key, value); s != SK_OK) return fail(s);
  }
  return SK_OK;
}

void print_prediction(const sk_prediction &p, bool json, const std::string &text) {
  if (json) {
    nlohmann::json j = {{"label", sk_label_name(p.label)},
                        {"probs",
                         {{"negative", p.probs[0]}, {"positive", p.probs[1]}, {"neutral", p.probs[2]}}},
                        {"degenerate", p.degenerate != 0}};
    std::cout << j.dump() << "\n";
  } else {
    std::printf("%s\t%.6f\t%.6f\t%.6f\n", sk_label_name(p.label), p.probs[0], p.probs[1], p.probs[2]);
  }
  if (p.degenerate)
    std::cerr << "sentikit: warning: input '" << text.substr(0, 40)
              << "' is empty after preprocessing; returned the fallback prediction\n";
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Indonesian review sentiment toolkit: stats, preprocessing, training, comparison, prediction"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON run configuration file");
  app.add_option("--seed", g.seed, "Random seed (overrides the config)");
  app.add_option("--out", g.out, "Output directory (overrides out_dir)");
  app.add_option("--data", g.data, "Dataset CSV (overrides dataset.path and SENTIKIT_DATA)");
  app.add_option("--resources", g.resources, "Directory with slang, stopword and root word files");
  app.add_option("--set", g.sets, "Override any config key, e.g. --set lstm.epochs=5 (repeatable)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_flag("--json", g.json, "Machine-readable output");

  auto *stats = app.add_subcommand("stats", "Class distribution of the dataset");

  auto *pre = app.add_subcommand("preprocess", "Run the text pipeline");
  std::string pre_in, pre_out, pre_text;
  pre->add_option("--in", pre_in, "Input CSV");
  pre->add_option("--out", pre_out, "Output JSONL, one token array per record");
  pre->add_option("--text", pre_text, "Preprocess a single text and print its tokens");

  auto *train = app.add_subcommand("train", "Train one model on the stratified split and evaluate it");
  std::string train_model;
  train->add_option("--model", train_model, "nb, lr, rf or lstm")->required()->check(CLI::IsMember({"nb", "lr", "rf", "lstm"}));

  auto *cmp = app.add_subcommand("compare", "Train several models under one split and rank them");
  std::string cmp_models;
  std::size_t cmp_cv = 0;
  cmp->add_option("--models", cmp_models, "Comma-separated subset, default nb,lr,rf,lstm");
  cmp->add_option("--cv", cmp_cv, "Run stratified k-fold cross-validation with k folds instead")->check(CLI::Range(2, 100));

  auto *pred = app.add_subcommand("predict", "Classify text with a saved model");
  std::string pred_model;
  std::vector<std::string> pred_texts;
  bool pred_stdin = false;
  pred->add_option("--model", pred_model, "Model file written by train or compare")->required();
  pred->add_option("text", pred_texts, "Texts to classify");
  pred->add_flag("--stdin", pred_stdin, "Read one text per line from standard input");

  auto *stem = app.add_subcommand("stem", "Stem Indonesian words");
  std::vector<std::string> stem_words;
  bool stem_trace = false;
  stem->add_option("words", stem_words, "Words to stem")->required();
  stem->add_flag("--trace", stem_trace, "Show every rule application");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : SK_ERR_USAGE;
  }

  ConfigPtr cfg;
  if (int st = build_config(g, cfg); st != SK_OK) return st;

  if (*stats) {
    char *out = nullptr;
    if (auto st = sk_stats(cfg.get(), g.json, &out); st != SK_OK) return fail(st);
    std::cout << take(out);
    return 0;
  }

  if (*pre) {
    if (!pre_text.empty()) {
      char *out = nullptr;
      if (auto st = sk_preprocess_text(cfg.get(), pre_text.c_str(), &out); st != SK_OK) return fail(st);
      std::cout << take(out) << "\n";
      return 0;
    }
    if (pre_in.empty() || pre_out.empty()) {
      std::cerr << "sentikit: preprocess needs --in and --out, or --text\n";
      return SK_ERR_USAGE;
    }
    size_t n = 0;
    if (auto st = sk_preprocess_file(cfg.get(), pre_in.c_str(), pre_out.c_str(), &n); st != SK_OK) return fail(st);
    std::cerr << "wrote " << n << " records to " << pre_out << "\n";
    return 0;
  }

  if (*train) {
    char *out = nullptr;
    if (auto st = sk_train(cfg.get(), train_model.c_str(), &out); st != SK_OK) return fail(st);
    const auto summary = nlohmann::json::parse(take(out));
    if (g.json) {
      std::cout << summary.dump(2) << "\n";
    } else {
      std::printf("%s: accuracy %.4f  weighted F1 %.4f  (train %zu, test %zu, %.1fs)\n",
                  summary["model"].get<std::string>().c_str(), summary["accuracy"].get<double>(),
                  summary["weighted"]["f1"].get<double>(), summary["n_train"].get<std::size_t>(),
                  summary["n_test"].get<std::size_t>(), summary["train_seconds"].get<double>());
      for (const auto &f : summary["files"]) std::printf("  wrote %s\n", f.get<std::string>().c_str());
    }
    return 0;
  }

  if (*cmp) {
    char *out = nullptr;
    if (auto st = sk_compare(cfg.get(), cmp_models.c_str(), cmp_cv, &out); st != SK_OK) return fail(st);
    const auto summary = nlohmann::json::parse(take(out));
    if (g.json)
      std::cout << summary.dump(2) << "\n";
    else
      std::cout << summary["text"].get<std::string>();
    return 0;
  }

  if (*pred) {
    sk_model *raw = nullptr;
    std::string resources = g.resources;
    if (resources.empty()) {
      char *cfg_json = nullptr;
      if (auto st = sk_config_to_json(cfg.get(), &cfg_json); st != SK_OK) return fail(st);
      resources = nlohmann::json::parse(take(cfg_json))["resources"].get<std::string>();
    }
    if (auto st = sk_model_load(pred_model.c_str(), resources.c_str(), &raw); st != SK_OK) return fail(st);
    ModelPtr model(raw);
    auto run = [&](const std::string &text) {
      sk_prediction p{};
      const sk_status st = sk_model_predict(model.get(), text.c_str(), &p);
      if (st == SK_OK) print_prediction(p, g.json, text);
      return st;
    };
    if (pred_stdin) {
      std::string line;
      while (std::getline(std::cin, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (auto st = run(line); st != SK_OK) return fail(st);
      }
    }
    if (!pred_stdin && pred_texts.empty()) {
      std::cerr << "sentikit: predict needs text arguments or --stdin\n";
      return SK_ERR_USAGE;
    }
    for (const auto &t : pred_texts) {
      if (auto st = run(t); st != SK_OK) return fail(st);
    }
    return 0;
  }

  if (*stem) {
    for (const auto &w : stem_words) {
      char *out = nullptr;
      if (auto st = sk_stem(cfg.get(), w.c_str(), stem_trace, &out); st != SK_OK) return fail(st);
      if (stem_trace)
        std::cout << take(out) << "\n";
      else
        std::cout << w << "\t" << take(out) << "\n";
    }
    return 0;
  }
  return SK_ERR_USAGE;
}
