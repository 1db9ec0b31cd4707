#include <algorithm>
#include <string>

#include "corpus.hpp"
#include "doctest.h"
#include "error.hpp"
#include "preprocess.hpp"
#include "resources.hpp"
#include "rng.hpp"
#include "stemmer.hpp"
#include "utf8.hpp"

using namespace sentikit;

namespace {

const Resources &resources() {
  static const Resources res = load_resources(SENTIKIT_TEST_DATA_DIR);
  return res;
}

PipelineConfig default_pipeline() {
  PipelineConfig cfg;
  cfg.slang_lexicon = resources().slang;
  cfg.stopwords = resources().stopwords;
  return cfg;
}

bool lowercase_letters_only(const std::string &tok) {
  std::size_t pos = 0;
  while (pos < tok.size()) {
    const char32_t cp = utf8::decode(tok, pos);
    if (!utf8::is_letter(cp) || utf8::to_lower(cp) != cp) return false;
  }
  return !tok.empty();
}

// Random text drawn from letters, digits, punctuation, emoji, URLs and
// mentions.
std::string random_text(Rng &rng) {
  static const char *pieces[] = {"Bagus", "bangeeeet", "GG", "😀", "!!!", " ", "  ", "http://t.co/x", "@dev",
                                 "#ml", "2024", "gk", "ini", "yang", "bermain", "makanan", "ÉLAN", "ß",
                                 "\t", "\n", "lag", "tidak", "sih", ",", "the", "game", "gamenya", "a"};
  std::string s;
  const auto n = rng.below(40);
  for (std::uint64_t i = 0; i < n; ++i) {
    s += pieces[rng.below(std::size(pieces))];
    if (rng.below(2)) s += ' ';
  }
  return s;
}

}  // namespace

TEST_CASE("case_fold") {
  CHECK(case_fold("Bagus Banget!") == "bagus banget!");
  CHECK(case_fold("sudah kecil") == "sudah kecil");
  CHECK(case_fold("GG😀") == "gg😀");
  CHECK(case_fold("ÀÉÎ") == "àéî");
}

TEST_CASE("clean") {
  CHECK(clean("game bagus!!! 😀 http://t.co/x @dev #ml 2024") == "game bagus");
  CHECK(clean("") == "");
  CHECK(clean("😡😡😡") == "");
  CHECK(clean("  mantap   jiwa ") == "mantap jiwa");
  CHECK(clean("bangeeeet") == "banget");
  CHECK(clean("keren") == "keren");
  CHECK(clean("mantaap") == "mantaap");  // doubles survive
  CHECK(clean("www.example.com ok") == "ok");
}

TEST_CASE("tokenize") {
  CHECK(tokenize("game bagus") == TokenSeq{"game", "bagus"});
  CHECK(tokenize("a   b") == TokenSeq{"a", "b"});
  CHECK(tokenize("").empty());
  CHECK(tokenize(" \t\n ").empty());
}

TEST_CASE("normalize_slang") {
  const SlangLexicon lex{{"gk", "tidak"}};
  CHECK(normalize_slang({"gk", "bagus"}, lex) == TokenSeq{"tidak", "bagus"});
  CHECK(normalize_slang({"zzz"}, lex) == TokenSeq{"zzz"});
  CHECK(normalize_slang({"gk", "x"}, {}) == TokenSeq{"gk", "x"});
  CHECK(resources().slang.at("gk") == "tidak");
}

TEST_CASE("remove_stopwords") {
  const StopwordSet stop{"ini"};
  CHECK(remove_stopwords({"game", "ini", "bagus"}, stop) == TokenSeq{"game", "bagus"});
  CHECK(remove_stopwords({"ini", "ini"}, stop).empty());
  CHECK(remove_stopwords({"a", "b"}, {}) == TokenSeq{"a", "b"});
  CHECK(resources().stopwords.contains("ini"));
  CHECK(resources().stopwords.contains("the"));
}

TEST_CASE("truncate") {
  TokenSeq t150(150, "x");
  for (std::size_t i = 0; i < t150.size(); ++i) t150[i] = "w" + std::to_string(i);
  const auto t = truncate(t150, 100);
  REQUIRE(t.size() == 100);
  CHECK(std::equal(t.begin(), t.end(), t150.begin()));
  CHECK(truncate(TokenSeq(50, "a"), 100).size() == 50);
  CHECK(truncate(TokenSeq(100, "a"), 100).size() == 100);
}

TEST_CASE("pipeline config validation") {
  PipelineConfig cfg;
  cfg.max_tokens = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.max_tokens = 5;
  cfg.stopwords = {"Ini"};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.stopwords = {"ini"};
  cfg.slang_lexicon = {{"GK", "tidak"}};
  CHECK_THROWS_AS(cfg.validate(), Error);
  default_pipeline().validate();
}

TEST_CASE("run_pipeline worked example") {
  const auto cfg = default_pipeline();
  const Stemmer &st = *resources().stemmer;
  const std::string text = "Gamenya bagus bangeeeet!!!";
  const auto folded = case_fold(text);
  CHECK(folded == "gamenya bagus bangeeeet!!!");
  const auto cleaned = clean(folded);
  CHECK(cleaned == "gamenya bagus banget");
  const auto toks = tokenize(cleaned);
  CHECK(toks == TokenSeq{"gamenya", "bagus", "banget"});
  const auto norm = normalize_slang(toks, cfg.slang_lexicon);
  CHECK(norm == TokenSeq{"game", "bagus", "banget"});
  const auto kept = remove_stopwords(norm, cfg.stopwords);
  CHECK(kept == TokenSeq{"game", "bagus", "banget"});
  const auto stemmed = st.stem_seq(kept);
  CHECK(run_pipeline(text, cfg, &st) == truncate(stemmed, cfg.max_tokens));
  CHECK(run_pipeline("", cfg, &st).empty());
}

TEST_CASE("disabled stages are skipped") {
  auto cfg = default_pipeline();
  cfg.stages.remove_stopwords = false;
  cfg.stages.normalize_slang = false;
  CHECK(run_pipeline("gk ini", cfg, nullptr) == TokenSeq{"gk", "ini"});
  cfg.stages.truncate = true;
  cfg.max_tokens = 1;
  CHECK(run_pipeline("gk ini", cfg, nullptr) == TokenSeq{"gk"});
}

TEST_CASE("pipeline properties on random text") {
  auto cfg = default_pipeline();
  cfg.max_tokens = 7;
  const Stemmer &st = *resources().stemmer;
  Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    const std::string text = random_text(rng);
    const auto out = run_pipeline(text, cfg, &st);
    REQUIRE(out.size() <= cfg.max_tokens);
    for (const auto &tok : out) REQUIRE(lowercase_letters_only(tok));
    const auto manual = truncate(
        st.stem_seq(remove_stopwords(normalize_slang(tokenize(clean(case_fold(text))), cfg.slang_lexicon),
                                     cfg.stopwords)),
        cfg.max_tokens);
    REQUIRE(out == manual);
    CHECK(run_pipeline(text, cfg, &st) == out);
    const auto folded = case_fold(text);
    CHECK(case_fold(folded) == folded);
    const auto cleaned = clean(folded);
    CHECK(clean(cleaned) == cleaned);
    const auto toks = tokenize(cleaned);
    const auto kept = remove_stopwords(toks, cfg.stopwords);
    CHECK(remove_stopwords(kept, cfg.stopwords) == kept);
    CHECK(truncate(truncate(toks, 3), 3) == truncate(toks, 3));
    CHECK(normalize_slang(toks, cfg.slang_lexicon).size() == toks.size());
  }
}

TEST_CASE("pipeline equals stage composition on a 100-review sample") {
  const auto corpus = load_csv(std::string(SENTIKIT_TEST_DATA_DIR) + "/standin_reviews.csv");
  const auto cfg = default_pipeline();
  const Stemmer &st = *resources().stemmer;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto &text = corpus[i * 97 % corpus.size()].text;
    const auto manual = truncate(
        st.stem_seq(remove_stopwords(normalize_slang(tokenize(clean(case_fold(text))), cfg.slang_lexicon),
                                     cfg.stopwords)),
        cfg.max_tokens);
    REQUIRE(run_pipeline(text, cfg, &st) == manual);
  }
}

TEST_CASE("resource file parsers") {
  const auto lex = parse_lexicon("# comment\ngk\ttidak\n\nbgt\tbanget\n");
  CHECK(lex.size() == 2);
  CHECK(lex.at("bgt") == "banget");
  const auto stop = parse_stopwords("# c\nini\n\nitu\n");
  CHECK(stop.size() == 2);
  CHECK(stop.contains("itu"));
}
