#include "stemmer.hpp"

#include <array>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "error.hpp"
#include "hash.hpp"

namespace sentikit {

namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'i' || c == 'u' || c == 'e' || c == 'o';
}

bool in_set(char c, std::string_view set) { return set.find(c) != std::string_view::npos; }

constexpr std::string_view kConsonants = "bcdfghjklmnpqrstvwxyz";

bool is_consonant(char c) { return in_set(c, kConsonants); }
bool is_az(char c) { return c >= 'a' && c <= 'z'; }

// Bounds-checked character access; returns '\0' past the end.
char at(std::string_view w, std::size_t i) { return i < w.size() ? w[i] : '\0'; }

std::string tail(std::string_view w, std::size_t from) {
  return from <= w.size() ? std::string(w.substr(from)) : std::string();
}

using Rule = std::function<std::optional<std::string>(std::string_view)>;

struct RuleGroup {
  const char *name;
  std::vector<Rule> rules;
};

using Opt = std::optional<std::string>;

// C-V alternation helpers for the common shapes "<prefix>V..." and
// "<prefix>C...".
Rule prefix_vowel(std::string_view prefix, std::string insert) {
  return [prefix, insert](std::string_view w) -> Opt {
    if (w.starts_with(prefix) && is_vowel(at(w, prefix.size())))
      return insert + tail(w, prefix.size());
    return std::nullopt;
  };
}

Rule prefix_class(std::string_view prefix, std::string_view cls, std::string insert = "") {
  return [prefix, cls, insert](std::string_view w) -> Opt {
    if (w.starts_with(prefix) && in_set(at(w, prefix.size()), cls) && at(w, prefix.size()) != 0)
      return insert + tail(w, prefix.size());
    return std::nullopt;
  };
}

// C{er,el,em,in}V infix rules: 'a' keeps the word, 'b' removes the infix.
RuleGroup infix_group(const char *name, std::string_view infix) {
  auto match = [infix](std::string_view w) {
    return is_consonant(at(w, 0)) && w.substr(1).starts_with(infix) &&
           is_vowel(at(w, 1 + infix.size()));
  };
  return {name,
          {[match](std::string_view w) -> Opt {
             if (match(w)) return std::string(w);
             return std::nullopt;
           },
           [match, infix](std::string_view w) -> Opt {
             if (match(w)) return std::string(1, w[0]) + tail(w, 1 + infix.size());
             return std::nullopt;
           }}};
}

const std::vector<RuleGroup> &prefix_rules() {
  static const std::vector<RuleGroup> groups = [] {
    std::vector<RuleGroup> g;
    // ber-
    g.push_back({"ber-V", {prefix_vowel("ber", ""), prefix_vowel("ber", "r")}});
    g.push_back({"ber-CAP", {[](std::string_view w) -> Opt {
                   if (w.starts_with("ber") && is_consonant(at(w, 3)) && is_az(at(w, 4))) {
                     if (tail(w, 5).starts_with("er")) return std::nullopt;
                     return tail(w, 3);
                   }
                   return std::nullopt;
                 }}});
    g.push_back({"ber-CAerV", {[](std::string_view w) -> Opt {
                   if (w.starts_with("ber") && is_consonant(at(w, 3)) && is_az(at(w, 4)) &&
                       w.substr(std::min<std::size_t>(5, w.size())).starts_with("er") &&
                       is_vowel(at(w, 7))) {
                     if (w[3] == 'r') return std::nullopt;
                     return tail(w, 3);
                   }
                   return std::nullopt;
                 }}});
    g.push_back({"belajar", {[](std::string_view w) -> Opt {
                   if (w == "belajar") return std::string("ajar");
                   return std::nullopt;
                 }}});
    g.push_back({"be-C1erC2", {[](std::string_view w) -> Opt {
                   if (w.starts_with("be") && in_set(at(w, 2), "bcdfghjklmnpqstvwxyz") &&
                       at(w, 2) != 0 && w.substr(std::min<std::size_t>(3, w.size())).starts_with("er") &&
                       is_consonant(at(w, 5)))
                     return tail(w, 2);
                   return std::nullopt;
                 }}});
    // ter-
    g.push_back({"ter-V", {prefix_vowel("ter", ""), prefix_vowel("ter", "r")}});
    g.push_back({"ter-CerV", {[](std::string_view w) -> Opt {
                   if (w.starts_with("ter") && is_consonant(at(w, 3)) &&
                       w.substr(std::min<std::size_t>(4, w.size())).starts_with("er") &&
                       is_vowel(at(w, 6))) {
                     if (w[3] == 'r') return std::nullopt;
                     return tail(w, 3);
                   }
                   return std::nullopt;
                 }}});
    g.push_back({"ter-CP", {[](std::string_view w) -> Opt {
                   if (w.starts_with("ter") && is_consonant(at(w, 3))) {
                     if (w[3] == 'r' || tail(w, 4).starts_with("er")) return std::nullopt;
                     return tail(w, 3);
                   }
                   return std::nullopt;
                 }}});
    g.push_back({"te-C1erC2", {[](std::string_view w) -> Opt {
                   if (w.starts_with("te") && is_consonant(at(w, 2)) &&
                       w.substr(std::min<std::size_t>(3, w.size())).starts_with("er") &&
                       is_consonant(at(w, 5))) {
                     if (w[2] == 'r') return std::nullopt;
                     return tail(w, 2);
                   }
                   return std::nullopt;
                 }}});
    // me-
    g.push_back({"me-{lrwy}V", {[](std::string_view w) -> Opt {
                   if (w.starts_with("me") && in_set(at(w, 2), "lrwy") && at(w, 2) != 0 &&
                       is_vowel(at(w, 3)))
                     return tail(w, 2);
                   return std::nullopt;
                 }}});
    g.push_back({"mem-{bfv}", {prefix_class("mem", "bfv")}});
    g.push_back({"mempe", {[](std::string_view w) -> Opt {
                   if (w.starts_with("mempe")) return "pe" + tail(w, 5);
                   return std::nullopt;
                 }}});
    g.push_back({"mem-V", {prefix_vowel("mem", "m"), prefix_vowel("mem", "p")}});
    g.push_back({"men-{cdjstz}", {prefix_class("men", "cdjstz")}});
    g.push_back({"men-V", {prefix_vowel("men", "n"), prefix_vowel("men", "t")}});
    g.push_back({"meng-{ghqk}", {prefix_class("meng", "g|hqk")}});
    g.push_back({"meng-V",
                 {prefix_vowel("meng", ""), prefix_vowel("meng", "k"),
                  [](std::string_view w) -> Opt {
                    if (w.starts_with("menge")) return tail(w, 5);
                    return std::nullopt;
                  },
                  prefix_vowel("meng", "ng")}});
    g.push_back({"meny-V", {prefix_vowel("meny", "ny"), prefix_vowel("meny", "s")}});
    g.push_back({"memp-V", {prefix_class("memp", "abcdfghijklmopqrstuvwxyz", "p")}});
    // pe-
    g.push_back({"pe-{wy}V", {[](std::string_view w) -> Opt {
                   if (w.starts_with("pe") && in_set(at(w, 2), "wy") && at(w, 2) != 0 &&
                       is_vowel(at(w, 3)))
                     return tail(w, 2);
                   return std::nullopt;
                 }}});
    g.push_back({"per-V", {prefix_vowel("per", ""), [](std::string_view w) -> Opt {
                             if (w.starts_with("per") && is_vowel(at(w, 3))) return tail(w, 2);
                             return std::nullopt;
                           }}});
    g.push_back({"per-CAP", {[](std::string_view w) -> Opt {
                   if (w.starts_with("per") && is_consonant(at(w, 3)) && is_az(at(w, 4))) {
                     if (tail(w, 5).starts_with("er")) return std::nullopt;
                     return tail(w, 3);
                   }
                   return std::nullopt;
                 }}});
    g.push_back({"per-CAerV", {[](std::string_view w) -> Opt {
                   if (w.starts_with("per") && is_consonant(at(w, 3)) && is_az(at(w, 4)) &&
                       w.substr(std::min<std::size_t>(5, w.size())).starts_with("er") &&
                       is_vowel(at(w, 7))) {
                     if (w[3] == 'r') return std::nullopt;
                     return tail(w, 3);
                   }
                   return std::nullopt;
                 }}});
    g.push_back({"pem-{bfv}", {prefix_class("pem", "bfv")}});
    g.push_back({"pem-V", {prefix_vowel("pem", "m"), prefix_vowel("pem", "p")}});
    g.push_back({"pen-{cdjz}", {prefix_class("pen", "cdjz")}});
    g.push_back({"pen-V", {prefix_vowel("pen", "n"), prefix_vowel("pen", "t")}});
    g.push_back({"peng-C", {prefix_class("peng", kConsonants)}});
    g.push_back({"peng-V",
                 {prefix_vowel("peng", ""), prefix_vowel("peng", "k"),
                  [](std::string_view w) -> Opt {
                    if (w.starts_with("penge")) return tail(w, 5);
                    return std::nullopt;
                  }}});
    g.push_back({"peny-V", {prefix_vowel("peny", "ny"), prefix_vowel("peny", "s")}});
    g.push_back({"pe-lV", {[](std::string_view w) -> Opt {
                   if (w == "pelajar") return std::string("ajar");
                   if (w.starts_with("pel") && is_vowel(at(w, 3))) return tail(w, 2);
                   return std::nullopt;
                 }}});
    g.push_back({"pe-CP", {[](std::string_view w) -> Opt {
                   if (w.starts_with("pe") && is_consonant(at(w, 2))) {
                     if (tail(w, 3).starts_with("er")) return std::nullopt;
                     return tail(w, 2);
                   }
                   return std::nullopt;
                 }}});
    g.push_back({"ter-C1erC2", {[](std::string_view w) -> Opt {
                   if (w.starts_with("ter") && in_set(at(w, 3), "bcdfghjkpqstvxz") &&
                       at(w, 3) != 0 && w.substr(std::min<std::size_t>(4, w.size())).starts_with("er") &&
                       is_consonant(at(w, 6)))
                     return tail(w, 3);
                   return std::nullopt;
                 }}});
    g.push_back({"pe-C1erC2", {[](std::string_view w) -> Opt {
                   if (w.starts_with("pe") && in_set(at(w, 2), "bcdfghjkpqstvxz") &&
                       at(w, 2) != 0 && w.substr(std::min<std::size_t>(3, w.size())).starts_with("er") &&
                       is_consonant(at(w, 5)))
                     return tail(w, 2);
                   return std::nullopt;
                 }}});
    // infixes
    g.push_back(infix_group("C-er-V", "er"));
    g.push_back(infix_group("C-el-V", "el"));
    g.push_back(infix_group("C-em-V", "em"));
    g.push_back(infix_group("C-in-V", "in"));
    // proclitics
    g.push_back({"ku-", {[](std::string_view w) -> Opt {
                   if (w.starts_with("ku")) return tail(w, 2);
                   return std::nullopt;
                 }}});
    g.push_back({"kau-", {[](std::string_view w) -> Opt {
                   if (w.starts_with("kau")) return tail(w, 3);
                   return std::nullopt;
                 }}});
    return g;
  }();
  return groups;
}

enum class Affix { Particle, Possessive, DerivSuffix, DerivPrefix };

struct Removal {
  std::string subject;
  std::string result;
  std::string removed;
  Affix type;
};

bool is_suffix(Affix a) { return a != Affix::DerivPrefix; }

std::string removed_part(const std::string &subject, const std::string &result, Affix type) {
  if (is_suffix(type)) return subject.substr(result.size());
  // prefix removals may recode, so report the leading part that differs
  if (subject.ends_with(result)) return subject.substr(0, subject.size() - result.size());
  return subject;
}

bool invalid_confix(std::string_view word, std::string_view suffix) {
  if (suffix.empty()) return false;
  const std::string_view p = word.substr(0, std::min<std::size_t>(2, word.size()));
  if (p == "be") return suffix == "i";
  if (p == "di") return suffix == "an";
  if (p == "ke") return suffix == "i" || suffix == "kan";
  if (p == "me") return suffix == "an";
  if (p == "se") return suffix == "i" || suffix == "kan";
  if (p == "te") return suffix == "an";
  return false;
}

bool precedence_adjusted(std::string_view w) {
  auto wrap = [&](std::string_view pre, std::string_view suf) {
    return w.size() >= pre.size() + suf.size() && w.starts_with(pre) && w.ends_with(suf);
  };
  return wrap("be", "lah") || wrap("be", "an") || wrap("me", "i") || wrap("di", "i") ||
         wrap("pe", "i") || wrap("ter", "i");
}

class StemRun {
 public:
  StemRun(const RootDictionary &dict, const StemmerOptions &opt, std::string_view word,
          StemTrace *trace)
      : dict_(dict), opt_(opt), original_(word), current_(word), trace_(trace) {}

  std::string execute() {
    start();
    std::string result = dict_.contains(current_) ? current_ : original_;
    if (trace_) {
      if (result != current_) trace_->steps.push_back({"fallback", result});
      trace_->output = result;
    }
    return result;
  }

 private:
  bool found() const { return dict_.contains(current_); }

  void set_current(std::string word, const char *rule) {
    current_ = std::move(word);
    if (trace_) trace_->steps.push_back({rule, current_});
  }

  void start() {
    if (found()) return;
    if (current_.size() <= 3) stopped_ = true;

    if (precedence_adjusted(original_)) {
      remove_prefixes();
      if (found()) return;
      remove_suffixes();
      if (found()) return;
      set_current(original_, "restore");
      removals_.clear();
      suffix_ = {};
    }

    remove_suffixes();
    if (found()) return;
    remove_prefixes();
    if (found()) return;
    restore_suffixes_loop();
  }

  bool length_ok(const std::string &w) const { return w.size() >= opt_.min_stem_length; }

  void record(std::string result, Affix type, const char *rule) {
    Removal r{current_, result, removed_part(current_, result, type), type};
    if (type == Affix::DerivSuffix) suffix_ = r.removed;
    removals_.push_back(std::move(r));
    set_current(std::move(result), rule);
  }

  void strip_suffix(std::initializer_list<std::string_view> suffixes, Affix type,
                    const char *rule) {
    // longest matching suffix wins
    std::string_view best;
    for (auto s : suffixes) {
      if (current_.ends_with(s) && s.size() > best.size()) best = s;
    }
    if (best.empty()) return;
    std::string result = current_.substr(0, current_.size() - best.size());
    if (!length_ok(result)) return;
    record(std::move(result), type, rule);
  }

  void remove_suffixes() {
    // each visitor, stopping early on a dictionary hit or a stopped run
    strip_suffix({"lah", "kah", "tah", "pun"}, Affix::Particle, "particle");
    if (found() || stopped_) return;
    strip_suffix({"ku", "mu", "nya"}, Affix::Possessive, "possessive");
    if (found() || stopped_) return;
    strip_suffix({"is", "isme", "isasi", "i", "kan", "an"}, Affix::DerivSuffix,
                 "derivational_suffix");
  }

  bool outermost_prefix() const {
    for (std::size_t i = attempt_start_; i < removals_.size(); ++i) {
      if (removals_[i].type == Affix::DerivPrefix) return false;
    }
    return true;
  }

  bool prefix_allowed(const std::string &result) const {
    if (!length_ok(result)) return false;
    if (opt_.forbid_invalid_confixes && outermost_prefix() && invalid_confix(current_, suffix_))
      return false;
    return true;
  }

  void visit_plain_prefix() {
    for (std::string_view p : {"di", "ke", "se"}) {
      if (current_.starts_with(p)) {
        std::string result = current_.substr(2);
        if (prefix_allowed(result)) record(std::move(result), Affix::DerivPrefix, "plain_prefix");
        return;
      }
    }
  }

  void visit_group(const RuleGroup &group) {
    Opt result;
    for (const auto &rule : group.rules) {
      result = rule(current_);
      if (result && dict_.contains(*result)) break;
    }
    if (!result || result->empty()) return;
    if (!prefix_allowed(*result)) return;
    record(std::move(*result), Affix::DerivPrefix, group.name);
  }

  void accept_prefix_visitors() {
    const std::size_t before = removals_.size();
    visit_plain_prefix();
    if (found() || stopped_ || removals_.size() > before) return;
    for (const auto &group : prefix_rules()) {
      visit_group(group);
      if (found() || stopped_ || removals_.size() > before) return;
    }
  }

  void remove_prefixes() {
    attempt_start_ = removals_.size();
    for (int i = 0; i < 3; ++i) {
      accept_prefix_visitors();
      if (found()) return;
    }
  }

  void restore_prefix() {
    if (!removals_.empty()) set_current(removals_.front().subject, "restore_prefix");
    // Drop prefix removals. Consecutive prefix removals are thinned one at a
    // time, matching the reference loop that erases while iterating.
    for (std::size_t i = 0; i < removals_.size(); ++i) {
      if (removals_[i].type == Affix::DerivPrefix) removals_.erase(removals_.begin() + i);
    }
  }

  void restore_suffixes_loop() {
    restore_prefix();
    const std::string saved = current_;
    const std::size_t n = removals_.size();
    for (std::size_t k = n; k-- > 0;) {
      const Removal removal = removals_[k];
      if (!is_suffix(removal.type)) continue;
      if (removal.removed == "kan") {
        suffix_ = "an";
        set_current(removal.result + "k", "restore_suffix_k");
        remove_prefixes();
        if (found()) return;
        suffix_ = {};
        set_current(removal.result + "kan", "restore_suffix");
      } else {
        suffix_ = {};
        set_current(removal.subject, "restore_suffix");
      }
      remove_prefixes();
      if (found()) return;
      set_current(saved, "restore");
    }
  }

  const RootDictionary &dict_;
  const StemmerOptions &opt_;
  std::string original_;
  std::string current_;
  StemTrace *trace_;
  bool stopped_ = false;
  std::vector<Removal> removals_;
  std::string suffix_;  // derivational suffix currently stripped
  std::size_t attempt_start_ = 0;
};

bool lowercase_letters(std::string_view w) {
  for (char c : w) {
    if (!is_az(c)) return false;
  }
  return !w.empty();
}

}  // namespace

RootDictionary parse_root_dictionary(std::string_view content) {
  RootDictionary dict;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!lowercase_letters(line)) {
      throw Error(ErrorCode::InvalidArgument, "root dictionary line " + std::to_string(line_no) +
                                                  ": '" + std::string(line) +
                                                  "' is not lowercase letters");
    }
    dict.roots.emplace(line);
  }
  if (dict.roots.empty()) throw Error(ErrorCode::InvalidArgument, "root dictionary is empty");
  dict.source_hash = sha256_hex(content);
  return dict;
}

RootDictionary load_root_dictionary(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_root_dictionary(buf.str());
}

Stemmer::Stemmer(RootDictionary dictionary, StemmerOptions options)
    : dict_(std::move(dictionary)), options_(options) {}

std::string Stemmer::stem(std::string_view word) const {
  if (word.empty()) return {};
  return StemRun(dict_, options_, word, nullptr).execute();
}

StemTrace Stemmer::trace(std::string_view word) const {
  StemTrace t;
  t.input = std::string(word);
  if (word.empty()) return t;
  StemRun(dict_, options_, word, &t).execute();
  return t;
}

TokenSeq Stemmer::stem_seq(const TokenSeq &tokens) const {
  TokenSeq out;
  out.reserve(tokens.size());
  for (const auto &t : tokens) out.push_back(stem(t));
  return out;
}

}  // namespace sentikit
