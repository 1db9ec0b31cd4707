#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "preprocess.hpp"

namespace sentikit {

using TokenId = std::uint32_t;

class Vocabulary {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kUnk = 1;
  static constexpr TokenId kFirstTerm = 2;

  Vocabulary();
  // Terms in id order (ids kFirstTerm...) with their document frequencies.
  Vocabulary(std::vector<std::string> terms, std::vector<std::uint32_t> doc_freq,
             std::size_t min_freq);

  std::size_t size() const { return id_to_token_.size(); }
  TokenId lookup(const std::string &token) const;  // kUnk when absent
  bool contains(const std::string &token) const { return token_to_id_.contains(token); }
  const std::string &token(TokenId id) const { return id_to_token_.at(id); }
  std::uint32_t doc_freq(TokenId id) const { return doc_freq_.at(id); }
  const std::vector<std::uint32_t> &doc_freqs() const { return doc_freq_; }
  std::size_t min_freq() const { return min_freq_; }

  // id<TAB>token<TAB>df lines
  std::string to_tsv() const;

 private:
  std::unordered_map<std::string, TokenId> token_to_id_;
  std::vector<std::string> id_to_token_;
  std::vector<std::uint32_t> doc_freq_;
  std::size_t min_freq_ = 1;
};

// Tokens with document frequency >= min_freq; ids by descending df, ties in
// byte order. Build from training documents only.
Vocabulary build_vocab(const std::vector<TokenSeq> &docs, std::size_t min_freq);

enum class IdfForm : std::uint8_t {
  // ln(N / df + 1): never zero or negative. Default.
  AddOne = 0,
  // ln(N / (df + 1)): the alternative smoothed-denominator form.
  SmoothedDenominator = 1,
};

const char *to_string(IdfForm form);

double tfidf_weight(std::uint32_t tf, std::uint32_t df, std::uint32_t n_docs,
                    IdfForm form = IdfForm::AddOne);

struct SparseVector {
  std::vector<std::pair<TokenId, double>> entries;  // strictly increasing ids
  std::size_t dim = 0;

  double norm() const;
};

struct TfIdfModel {
  Vocabulary vocab;
  std::uint32_t n_docs = 0;
  IdfForm form = IdfForm::AddOne;

  std::size_t dim() const { return vocab.size(); }
};

TfIdfModel fit_tfidf(const std::vector<TokenSeq> &docs, std::size_t min_freq,
                     IdfForm form = IdfForm::AddOne);
TfIdfModel make_tfidf(Vocabulary vocab, std::uint32_t n_docs, IdfForm form = IdfForm::AddOne);

// One entry per distinct in-vocabulary token, L2-normalized; OOV dropped.
SparseVector vectorize_tfidf(const TokenSeq &tokens, const TfIdfModel &model);

struct PaddedSeq {
  std::vector<TokenId> ids;  // length L
  std::size_t true_len = 0;
};

PaddedSeq encode_seq(const TokenSeq &tokens, const Vocabulary &vocab, std::size_t length);
// Tokens for ids before true_len; UNK renders as "<unk>".
TokenSeq decode_seq(const PaddedSeq &seq, const Vocabulary &vocab);

}  // namespace sentikit
