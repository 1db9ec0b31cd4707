#include "preprocess.hpp"

#include <fstream>
#include <sstream>

#include "error.hpp"
#include "stemmer.hpp"
#include "utf8.hpp"

namespace sentikit {

namespace {

bool is_lower_token(std::string_view s) {
  return case_fold(s) == s;
}

bool ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Blanks out URL, mention and hashtag spans (up to the next whitespace).
std::string drop_spans(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto starts = [&](std::string_view prefix) { return text.substr(i).starts_with(prefix); };
  while (i < n) {
    const bool at_word_start = i == 0 || ascii_space(text[i - 1]);
    const bool span = starts("http://") || starts("https://") ||
                      (at_word_start && starts("www.")) || text[i] == '@' || text[i] == '#';
    if (span) {
      while (i < n && !ascii_space(text[i])) ++i;
      out.push_back(' ');
      continue;
    }
    out.push_back(text[i++]);
  }
  return out;
}

std::string slurp(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string_view> lines_of(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && ascii_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && ascii_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

void PipelineConfig::validate() const {
  if (max_tokens < 1) throw Error(ErrorCode::InvalidArgument, "max_tokens must be >= 1");
  for (const auto &[raw, _] : slang_lexicon) {
    if (!is_lower_token(raw))
      throw Error(ErrorCode::InvalidArgument, "lexicon key '" + raw + "' is not lowercase");
  }
  for (const auto &w : stopwords) {
    if (!is_lower_token(w))
      throw Error(ErrorCode::InvalidArgument, "stopword '" + w + "' is not lowercase");
  }
}

std::string case_fold(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) utf8::append(out, utf8::to_lower(utf8::decode(text, pos)));
  return out;
}

std::string clean(std::string_view text) {
  const std::string spans_removed = drop_spans(text);
  std::string_view src = spans_removed;

  std::string out;
  out.reserve(src.size());
  char32_t run_char = 0;
  std::size_t run_len = 0;
  std::size_t run_start = 0;  // byte offset in out where the run begins
  bool pending_space = false;

  std::size_t pos = 0;
  while (pos < src.size()) {
    const char32_t cp = utf8::decode(src, pos);
    if (!utf8::is_letter(cp)) {
      pending_space = !out.empty();
      run_len = 0;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
      run_len = 0;
    }
    if (run_len > 0 && cp == run_char) {
      ++run_len;
      if (run_len == 3) {
        // third repeat: shrink the run back to a single letter
        out.resize(run_start);
        utf8::append(out, cp);
      } else if (run_len < 3) {
        utf8::append(out, cp);
      }
      continue;
    }
    run_char = cp;
    run_len = 1;
    run_start = out.size();
    utf8::append(out, cp);
  }
  return out;
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq out;
  std::size_t pos = 0;
  std::size_t token_start = 0;
  bool in_token = false;
  while (pos < text.size()) {
    const std::size_t here = pos;
    const char32_t cp = utf8::decode(text, pos);
    if (utf8::is_space(cp)) {
      if (in_token) out.emplace_back(text.substr(token_start, here - token_start));
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      token_start = here;
    }
  }
  if (in_token) out.emplace_back(text.substr(token_start));
  return out;
}

TokenSeq normalize_slang(const TokenSeq &tokens, const SlangLexicon &lexicon) {
  TokenSeq out;
  out.reserve(tokens.size());
  for (const auto &t : tokens) {
    auto it = lexicon.find(t);
    out.push_back(it == lexicon.end() ? t : it->second);
  }
  return out;
}

TokenSeq remove_stopwords(const TokenSeq &tokens, const StopwordSet &stopwords) {
  TokenSeq out;
  out.reserve(tokens.size());
  for (const auto &t : tokens) {
    if (!stopwords.contains(t)) out.push_back(t);
  }
  return out;
}

TokenSeq truncate(const TokenSeq &tokens, std::size_t max_tokens) {
  if (tokens.size() <= max_tokens) return tokens;
  return TokenSeq(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(max_tokens));
}

TokenSeq run_pipeline(std::string_view text, const PipelineConfig &cfg,
                      const Stemmer *stemmer) {
  const auto &st = cfg.stages;
  std::string s = st.case_fold ? case_fold(text) : std::string(text);
  if (st.clean) s = clean(s);
  TokenSeq tokens = tokenize(s);
  if (st.normalize_slang) tokens = normalize_slang(tokens, cfg.slang_lexicon);
  if (st.remove_stopwords) tokens = remove_stopwords(tokens, cfg.stopwords);
  if (st.stem && stemmer != nullptr) tokens = stemmer->stem_seq(tokens);
  if (st.truncate) tokens = truncate(tokens, cfg.max_tokens);
  return tokens;
}

SlangLexicon parse_lexicon(std::string_view content) {
  SlangLexicon lexicon;
  std::size_t line_no = 0;
  for (std::string_view line : lines_of(content)) {
    ++line_no;
    line = strip(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument,
                  "lexicon line " + std::to_string(line_no) + ": expected raw<TAB>standard");
    }
    std::string raw(strip(line.substr(0, tab)));
    std::string standard(strip(line.substr(tab + 1)));
    if (raw.empty() || standard.empty() || tokenize(standard).size() != 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "lexicon line " + std::to_string(line_no) + ": entries must be single tokens");
    }
    lexicon.emplace(case_fold(raw), case_fold(standard));
  }
  return lexicon;
}

SlangLexicon load_lexicon(const std::filesystem::path &path) {
  return parse_lexicon(slurp(path));
}

StopwordSet parse_stopwords(std::string_view content) {
  StopwordSet out;
  for (std::string_view line : lines_of(content)) {
    line = strip(line);
    if (line.empty() || line.front() == '#') continue;
    out.insert(case_fold(line));
  }
  return out;
}

StopwordSet load_stopwords(const std::filesystem::path &path) {
  return parse_stopwords(slurp(path));
}

}  // namespace sentikit
