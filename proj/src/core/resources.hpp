#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "preprocess.hpp"
#include "stemmer.hpp"

namespace sentikit {

// Bundled pipeline data: slang lexicon, stopword lists and root dictionary.
struct Resources {
  std::filesystem::path dir;
  SlangLexicon slang;
  StopwordSet stopwords;  // Indonesian and English merged
  std::shared_ptr<const Stemmer> stemmer;
  std::string slang_sha256;
  std::string stopwords_id_sha256;
  std::string stopwords_en_sha256;
  std::string dictionary_sha256;

  // SHA-256 over the four file digests; models record it at train time.
  std::string fingerprint() const;
};

inline constexpr const char *kSlangFile = "slang.tsv";
inline constexpr const char *kStopwordsIdFile = "stopwords_id.txt";
inline constexpr const char *kStopwordsEnFile = "stopwords_en.txt";
inline constexpr const char *kRootWordsFile = "root_words.txt";

// An empty dir resolves to $SENTIKIT_RESOURCES, then the build-time default.
std::filesystem::path resolve_resource_dir(const std::filesystem::path &dir);
Resources load_resources(const std::filesystem::path &dir, StemmerOptions options = {});

}  // namespace sentikit
