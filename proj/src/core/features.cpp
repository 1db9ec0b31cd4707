#include "features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "error.hpp"

namespace sentikit {

Vocabulary::Vocabulary() : id_to_token_{"<pad>", "<unk>"}, doc_freq_{0, 0} {}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq,
                       std::size_t min_freq)
    : Vocabulary() {
  if (terms.size() != doc_freq.size())
    throw Error(ErrorCode::InvalidArgument, "vocabulary terms and frequencies differ in length");
  min_freq_ = min_freq;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto id = static_cast<TokenId>(id_to_token_.size());
    if (!token_to_id_.emplace(terms[i], id).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate vocabulary term '" + terms[i] + "'");
    id_to_token_.push_back(std::move(terms[i]));
    doc_freq_.push_back(doc_freq[i]);
  }
}

TokenId Vocabulary::lookup(const std::string &token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? kUnk : it->second;
}

std::string Vocabulary::to_tsv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < id_to_token_.size(); ++i)
    out << i << '\t' << id_to_token_[i] << '\t' << doc_freq_[i] << '\n';
  return out.str();
}

Vocabulary build_vocab(const std::vector<TokenSeq> &docs, std::size_t min_freq) {
  if (docs.empty()) throw Error(ErrorCode::EmptyTrainingSet, "cannot build a vocabulary from zero documents");
  std::map<std::string, std::uint32_t> df;
  std::vector<const std::string *> seen;
  for (const auto &doc : docs) {
    seen.clear();
    for (const auto &t : doc) seen.push_back(&t);
    std::sort(seen.begin(), seen.end(), [](auto *a, auto *b) { return *a < *b; });
    seen.erase(std::unique(seen.begin(), seen.end(), [](auto *a, auto *b) { return *a == *b; }),
               seen.end());
    for (const auto *t : seen) ++df[*t];
  }
  std::vector<std::pair<std::string, std::uint32_t>> kept;
  for (auto &[token, count] : df) {
    if (count >= min_freq) kept.emplace_back(token, count);
  }
  // std::map iteration is already byte-ordered, so stable_sort keeps ties alphabetical
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  std::vector<std::string> terms;
  std::vector<std::uint32_t> freqs;
  terms.reserve(kept.size());
  freqs.reserve(kept.size());
  for (auto &[token, count] : kept) {
    terms.push_back(token);
    freqs.push_back(count);
  }
  return Vocabulary(std::move(terms), std::move(freqs), min_freq);
}

const char *to_string(IdfForm form) {
  return form == IdfForm::AddOne ? "ln(N/df+1)" : "ln(N/(df+1))";
}

double tfidf_weight(std::uint32_t tf, std::uint32_t df, std::uint32_t n_docs, IdfForm form) {
  if (df == 0) throw Error(ErrorCode::ZeroDf, "document frequency must be >= 1");
  if (n_docs < df) throw Error(ErrorCode::InvalidArgument, "document frequency exceeds corpus size");
  if (tf == 0) return 0.0;
  const double n = n_docs;
  const double idf =
      form == IdfForm::AddOne ? std::log(n / df + 1.0) : std::log(n / (static_cast<double>(df) + 1.0));
  return tf * idf;
}

double SparseVector::norm() const {
  double s = 0.0;
  for (const auto &[_, w] : entries) s += w * w;
  return std::sqrt(s);
}

TfIdfModel make_tfidf(Vocabulary vocab, std::uint32_t n_docs, IdfForm form) {
  if (n_docs < 1) throw Error(ErrorCode::InvalidArgument, "TF-IDF model needs N >= 1");
  for (TokenId id = Vocabulary::kFirstTerm; id < vocab.size(); ++id) {
    const auto df = vocab.doc_freq(id);
    if (df < 1 || df > n_docs)
      throw Error(ErrorCode::InvalidArgument, "document frequency out of range for '" + vocab.token(id) + "'");
  }
  return TfIdfModel{std::move(vocab), n_docs, form};
}

TfIdfModel fit_tfidf(const std::vector<TokenSeq> &docs, std::size_t min_freq, IdfForm form) {
  Vocabulary vocab = build_vocab(docs, min_freq);
  return make_tfidf(std::move(vocab), static_cast<std::uint32_t>(docs.size()), form);
}

SparseVector vectorize_tfidf(const TokenSeq &tokens, const TfIdfModel &model) {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto &t : tokens) {
    const TokenId id = model.vocab.lookup(t);
    if (id >= Vocabulary::kFirstTerm) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());

  SparseVector v;
  v.dim = model.dim();
  for (std::size_t i = 0; i < ids.size();) {
    std::size_t j = i;
    while (j < ids.size() && ids[j] == ids[i]) ++j;
    const auto tf = static_cast<std::uint32_t>(j - i);
    v.entries.emplace_back(ids[i], tfidf_weight(tf, model.vocab.doc_freq(ids[i]), model.n_docs, model.form));
    i = j;
  }
  const double n = v.norm();
  if (n > 0.0) {
    for (auto &[_, w] : v.entries) w /= n;
  }
  return v;
}

PaddedSeq encode_seq(const TokenSeq &tokens, const Vocabulary &vocab, std::size_t length) {
  if (length < 1) throw Error(ErrorCode::InvalidArgument, "sequence length must be >= 1");
  PaddedSeq seq;
  seq.true_len = std::min(tokens.size(), length);
  seq.ids.assign(length, Vocabulary::kPad);
  for (std::size_t i = 0; i < seq.true_len; ++i) seq.ids[i] = vocab.lookup(tokens[i]);
  return seq;
}

TokenSeq decode_seq(const PaddedSeq &seq, const Vocabulary &vocab) {
  TokenSeq out;
  out.reserve(seq.true_len);
  for (std::size_t i = 0; i < seq.true_len; ++i) out.push_back(vocab.token(seq.ids[i]));
  return out;
}

}  // namespace sentikit
