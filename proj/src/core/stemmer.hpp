#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "preprocess.hpp"

namespace sentikit {

struct RootDictionary {
  std::unordered_set<std::string> roots;
  std::string source_hash;  // SHA-256 hex of the word list file

  bool contains(std::string_view word) const { return roots.contains(std::string(word)); }
  std::size_t size() const { return roots.size(); }
};

// One root per line, lowercase letters only. Throws InvalidArgument on any
// other entry and on an empty list.
RootDictionary parse_root_dictionary(std::string_view content);
RootDictionary load_root_dictionary(const std::filesystem::path &path);

struct StemStep {
  std::string rule;
  std::string form;
};

// Every change of the working form in order; the last step's form is the
// output.
struct StemTrace {
  std::string input;
  std::vector<StemStep> steps;
  std::string output;
};

struct StemmerOptions {
  // Reject an outermost prefix that forms a classical invalid confix with the
  // stripped derivational suffix (be-i, di-an, ke-i, ke-kan, me-an, se-i,
  // se-kan, te-an). Off by default: the reference algorithm accepts these
  // pairs and enabling it costs agreement on affixed forms such as di-...-an.
  bool forbid_invalid_confixes = false;
  // A strip never leaves fewer letters than this.
  std::size_t min_stem_length = 3;
};

// Dictionary-driven confix-stripping stemmer for Indonesian. Order: dictionary
// check, particles (-lah -kah -tah -pun), possessives (-ku -mu -nya),
// derivational suffixes (-i -kan -an and loan -is -isme -isasi), then up to
// three prefix removals (di- ke- se- and the recoding rules for be- te- me- pe-
// plus the infix and ku-/kau- rules), with a dictionary check after every
// strip. Words shaped like be-lah, be-an, me-i, di-i, pe-i, ter-i try prefixes
// first. If nothing reaches a root, the suffix-restoring loop retries prefix
// removal with each suffix put back. Falls back to the input word.
class Stemmer {
 public:
  explicit Stemmer(RootDictionary dictionary, StemmerOptions options = {});

  std::string stem(std::string_view word) const;
  StemTrace trace(std::string_view word) const;
  TokenSeq stem_seq(const TokenSeq &tokens) const;

  const RootDictionary &dictionary() const { return dict_; }
  const StemmerOptions &options() const { return options_; }

 private:
  RootDictionary dict_;
  StemmerOptions options_;
};

}  // namespace sentikit
