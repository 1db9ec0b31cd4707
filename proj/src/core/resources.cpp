#include "resources.hpp"

#include <cstdlib>

#include "error.hpp"
#include "fileio.hpp"
#include "hash.hpp"

#ifndef SENTIKIT_DEFAULT_DATA_DIR
#define SENTIKIT_DEFAULT_DATA_DIR "data"
#endif

namespace sentikit {

std::string Resources::fingerprint() const {
  return sha256_hex("slang:" + slang_sha256 + "\nstopwords_id:" + stopwords_id_sha256 +
                    "\nstopwords_en:" + stopwords_en_sha256 + "\ndictionary:" + dictionary_sha256 + "\n");
}

std::filesystem::path resolve_resource_dir(const std::filesystem::path &dir) {
  if (!dir.empty()) return dir;
  if (const char *env = std::getenv("SENTIKIT_RESOURCES"); env && *env) return env;
  return SENTIKIT_DEFAULT_DATA_DIR;
}

Resources load_resources(const std::filesystem::path &dir, StemmerOptions options) {
  Resources r;
  r.dir = resolve_resource_dir(dir);
  const std::string slang = read_file(r.dir / kSlangFile);
  const std::string sw_id = read_file(r.dir / kStopwordsIdFile);
  const std::string sw_en = read_file(r.dir / kStopwordsEnFile);
  const std::string roots = read_file(r.dir / kRootWordsFile);

  r.slang = parse_lexicon(slang);
  r.stopwords = parse_stopwords(sw_id);
  r.stopwords.merge(parse_stopwords(sw_en));
  r.slang_sha256 = sha256_hex(slang);
  r.stopwords_id_sha256 = sha256_hex(sw_id);
  r.stopwords_en_sha256 = sha256_hex(sw_en);
  RootDictionary dict = parse_root_dictionary(roots);
  r.dictionary_sha256 = dict.source_hash;
  r.stemmer = std::make_shared<const Stemmer>(std::move(dict), options);
  return r;
}

}  // namespace sentikit
