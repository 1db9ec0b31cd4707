#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sentikit {

class Stemmer;

using TokenSeq = std::vector<std::string>;
using SlangLexicon = std::unordered_map<std::string, std::string>;
using StopwordSet = std::unordered_set<std::string>;

struct StageFlags {
  bool case_fold = true;
  bool clean = true;
  bool normalize_slang = true;
  bool remove_stopwords = true;
  bool stem = true;
  bool truncate = true;
};

struct PipelineConfig {
  std::size_t max_tokens = 100;
  SlangLexicon slang_lexicon;
  StopwordSet stopwords;
  StageFlags stages;

  // Throws InvalidArgument when max_tokens is zero or a lexicon key or
  // stopword is not lowercase.
  void validate() const;
};

std::string case_fold(std::string_view text);
// Drops URLs, @mentions and #hashtags, replaces every non-letter with a space,
// collapses runs of three or more identical letters to one, then squeezes
// whitespace. Expects case-folded input.
std::string clean(std::string_view text);
TokenSeq tokenize(std::string_view text);
TokenSeq normalize_slang(const TokenSeq &tokens, const SlangLexicon &lexicon);
TokenSeq remove_stopwords(const TokenSeq &tokens, const StopwordSet &stopwords);
TokenSeq truncate(const TokenSeq &tokens, std::size_t max_tokens);

// case_fold, clean, tokenize, normalize_slang, remove_stopwords, stem each,
// truncate. Slang mapping runs on tokens, so it follows tokenization. A null
// stemmer skips stemming.
TokenSeq run_pipeline(std::string_view text, const PipelineConfig &cfg,
                      const Stemmer *stemmer);

// Lexicon file: raw<TAB>standard per line, '#' starts a comment.
SlangLexicon parse_lexicon(std::string_view content);
SlangLexicon load_lexicon(const std::filesystem::path &path);
// One token per line; blank lines and '#' comments ignored.
StopwordSet parse_stopwords(std::string_view content);
StopwordSet load_stopwords(const std::filesystem::path &path);

}  // namespace sentikit
