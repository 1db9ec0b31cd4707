#include "model.hpp"

#include <bit>
#include <cstring>

#include "error.hpp"
#include "fileio.hpp"

namespace sentikit {

using nlohmann::json;

const char *to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Nb: return "nb";
    case ModelKind::Lr: return "lr";
    case ModelKind::Rf: return "rf";
    case ModelKind::Lstm: return "lstm";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "nb") return ModelKind::Nb;
  if (name == "lr") return ModelKind::Lr;
  if (name == "rf") return ModelKind::Rf;
  if (name == "lstm") return ModelKind::Lstm;
  throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(name) + "' (expected nb, lr, rf or lstm)");
}

ModelOutput predict_tokens(const TrainedModel &model, const TokenSeq &tokens) {
  ModelOutput out;
  out.degenerate = tokens.empty();
  switch (model.kind) {
    case ModelKind::Nb: out.prediction = predict(model.nb, vectorize_tfidf(tokens, model.tfidf)); break;
    case ModelKind::Lr: out.prediction = predict(model.lr, vectorize_tfidf(tokens, model.tfidf)); break;
    case ModelKind::Rf: out.prediction = predict(model.rf, vectorize_tfidf(tokens, model.tfidf)); break;
    case ModelKind::Lstm: {
      if (tokens.empty()) {
        double total = 0.0;
        for (auto n : model.train_counts) total += static_cast<double>(n);
        for (std::size_t c = 0; c < kNumClasses; ++c)
          out.prediction.probs[c] = static_cast<double>(model.train_counts[c]) / total;
      } else {
        const auto probs = forward(encode_seq(tokens, model.lstm_vocab, model.seq_len), model.lstm, Mode::Infer);
        std::copy(probs.begin(), probs.end(), out.prediction.probs.begin());
      }
      out.prediction.label = argmax_label(out.prediction.probs);
      break;
    }
  }
  return out;
}

namespace {

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) buf_.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) buf_.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void f64s(std::span<const double> v) {
    for (double x : v) f64(x);
  }
  void bytes(std::string_view s) { buf_.append(s); }
  void section(const char tag[4], const std::string &payload) {
    buf_.append(tag, 4);
    u64(payload.size());
    buf_.append(payload);
  }
  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + k])) << (8 * k);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + k])) << (8 * k);
    pos_ += 8;
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  void f64s(std::span<double> out) {
    need(8 * out.size());
    for (double &x : out) x = f64();
  }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error(ErrorCode::BadModelFile, "model file is truncated");
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

json stages_json(const StageFlags &s) {
  return {{"case_fold", s.case_fold},       {"clean", s.clean}, {"normalize_slang", s.normalize_slang},
          {"remove_stopwords", s.remove_stopwords}, {"stem", s.stem}, {"truncate", s.truncate}};
}

StageFlags stages_from(const json &j) {
  StageFlags s;
  s.case_fold = j.at("case_fold").get<bool>();
  s.clean = j.at("clean").get<bool>();
  s.normalize_slang = j.at("normalize_slang").get<bool>();
  s.remove_stopwords = j.at("remove_stopwords").get<bool>();
  s.stem = j.at("stem").get<bool>();
  s.truncate = j.at("truncate").get<bool>();
  return s;
}

std::string vocab_payload(const Vocabulary &v) {
  Writer w;
  w.u32(static_cast<std::uint32_t>(v.size() - Vocabulary::kFirstTerm));
  for (TokenId id = Vocabulary::kFirstTerm; id < v.size(); ++id) {
    w.u32(static_cast<std::uint32_t>(v.token(id).size()));
    w.bytes(v.token(id));
    w.u32(v.doc_freq(id));
  }
  return w.take();
}

Vocabulary vocab_from(std::string_view payload, std::size_t min_freq) {
  Reader r(payload);
  const std::uint32_t n = r.u32();
  std::vector<std::string> terms;
  std::vector<std::uint32_t> dfs;
  for (std::uint32_t k = 0; k < n; ++k) {
    const std::uint32_t len = r.u32();
    terms.emplace_back(r.bytes(len));
    dfs.push_back(r.u32());
  }
  if (!r.done()) throw Error(ErrorCode::BadModelFile, "trailing bytes in vocabulary section");
  return Vocabulary(std::move(terms), std::move(dfs), min_freq);
}

}  // namespace

std::string serialize_model(const TrainedModel &m) {
  json meta;
  meta["kind"] = to_string(m.kind);
  meta["max_tokens"] = m.max_tokens;
  meta["stages"] = stages_json(m.stages);
  meta["fingerprint"] = m.fingerprint;
  meta["seed"] = m.seed;
  meta["hyper"] = m.hyper;
  meta["labels"] = {"negative", "positive", "neutral"};

  Writer p;
  const Vocabulary *vocab = nullptr;
  if (m.kind == ModelKind::Lstm) {
    vocab = &m.lstm_vocab;
    const auto &s = m.lstm.shape();
    meta["lstm"] = {{"vocab", s.vocab}, {"d", s.d}, {"h", s.h}, {"classes", s.classes}, {"seq_len", m.seq_len},
                    {"train_counts", m.train_counts}, {"min_freq", m.lstm_vocab.min_freq()}};
    p.f64s(m.lstm.data());
  } else {
    vocab = &m.tfidf.vocab;
    meta["tfidf"] = {{"n_docs", m.tfidf.n_docs},
                     {"idf", static_cast<int>(m.tfidf.form)},
                     {"dim", m.tfidf.dim()},
                     {"min_freq", m.tfidf.vocab.min_freq()}};
    if (m.kind == ModelKind::Nb) {
      meta["nb_alpha"] = m.nb.alpha;
      p.f64s(m.nb.log_prior);
      for (const auto &row : m.nb.log_likelihood) p.f64s(row);
    } else if (m.kind == ModelKind::Lr) {
      meta["lr_l2"] = m.lr.l2;
      meta["lr_epochs_run"] = m.lr.epochs_run;
      p.f64s(m.lr.W);
      p.f64s(m.lr.b);
    } else {
      meta["rf"] = {{"max_depth", m.rf.max_depth}, {"features_per_split", m.rf.features_per_split}};
      p.u32(static_cast<std::uint32_t>(m.rf.trees.size()));
      for (const auto &tree : m.rf.trees) {
        p.u32(static_cast<std::uint32_t>(tree.nodes.size()));
        for (const auto &node : tree.nodes) {
          p.i32(node.feature);
          p.f64(node.threshold);
          p.u32(node.left);
          p.u32(node.right);
          p.f64s(node.counts);
        }
      }
    }
  }

  Writer w;
  w.bytes("SENTIKIT");
  w.u32(kModelFormatVersion);
  w.section("META", meta.dump());
  w.section("VOCB", vocab_payload(*vocab));
  w.section("PARM", p.take());
  return w.take();
}

TrainedModel deserialize_model(std::string_view bytes) {
  Reader r(bytes);
  if (bytes.size() < 12 || r.bytes(8) != "SENTIKIT") throw Error(ErrorCode::BadModelFile, "not a model file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion)
    throw Error(ErrorCode::BadModelFile, "unsupported model format version " + std::to_string(version));

  std::string_view meta_bytes, vocab_bytes, param_bytes;
  bool have_meta = false, have_vocab = false, have_params = false;
  while (!r.done()) {
    const std::string_view tag = r.bytes(4);
    const std::uint64_t len = r.u64();
    const std::string_view payload = r.bytes(len);
    if (tag == "META") meta_bytes = payload, have_meta = true;
    else if (tag == "VOCB") vocab_bytes = payload, have_vocab = true;
    else if (tag == "PARM") param_bytes = payload, have_params = true;
  }
  if (!have_meta || !have_vocab || !have_params) throw Error(ErrorCode::BadModelFile, "model file is missing a section");

  TrainedModel m;
  try {
    const json meta = json::parse(meta_bytes);
    m.kind = parse_model_kind(meta.at("kind").get<std::string>());
    m.max_tokens = meta.at("max_tokens").get<std::size_t>();
    m.stages = stages_from(meta.at("stages"));
    m.fingerprint = meta.at("fingerprint").get<std::string>();
    m.seed = meta.at("seed").get<std::uint64_t>();
    m.hyper = meta.at("hyper");

    Reader p(param_bytes);
    if (m.kind == ModelKind::Lstm) {
      const auto &l = meta.at("lstm");
      m.lstm_vocab = vocab_from(vocab_bytes, l.at("min_freq").get<std::size_t>());
      LstmShape shape{l.at("vocab").get<std::size_t>(), l.at("d").get<std::size_t>(), l.at("h").get<std::size_t>(),
                      l.at("classes").get<std::size_t>()};
      if (shape.vocab != m.lstm_vocab.size()) throw Error(ErrorCode::BadModelFile, "embedding rows differ from vocabulary size");
      if (shape.classes != kNumClasses) throw Error(ErrorCode::BadModelFile, "model has an unexpected class count");
      m.seq_len = l.at("seq_len").get<std::size_t>();
      m.train_counts = l.at("train_counts").get<ClassCounts>();
      m.lstm = LstmParams(shape);
      p.f64s(m.lstm.data());
    } else {
      const auto &t = meta.at("tfidf");
      Vocabulary vocab = vocab_from(vocab_bytes, t.at("min_freq").get<std::size_t>());
      m.tfidf = make_tfidf(std::move(vocab), t.at("n_docs").get<std::uint32_t>(),
                           static_cast<IdfForm>(t.at("idf").get<int>()));
      const std::size_t dim = m.tfidf.dim();
      if (m.kind == ModelKind::Nb) {
        m.nb.dim = dim;
        m.nb.alpha = meta.at("nb_alpha").get<double>();
        p.f64s(m.nb.log_prior);
        for (auto &row : m.nb.log_likelihood) {
          row.resize(dim);
          p.f64s(row);
        }
      } else if (m.kind == ModelKind::Lr) {
        m.lr = make_lr(dim, meta.at("lr_l2").get<double>());
        m.lr.epochs_run = meta.at("lr_epochs_run").get<std::size_t>();
        p.f64s(m.lr.W);
        p.f64s(m.lr.b);
      } else {
        m.rf.dim = dim;
        m.rf.max_depth = meta.at("rf").at("max_depth").get<std::size_t>();
        m.rf.features_per_split = meta.at("rf").at("features_per_split").get<std::size_t>();
        const std::uint32_t n_trees = p.u32();
        m.rf.trees.resize(n_trees);
        for (auto &tree : m.rf.trees) {
          const std::uint32_t n_nodes = p.u32();
          if (n_nodes == 0) throw Error(ErrorCode::BadModelFile, "empty decision tree");
          tree.nodes.resize(n_nodes);
          for (auto &node : tree.nodes) {
            node.feature = p.i32();
            node.threshold = p.f64();
            node.left = p.u32();
            node.right = p.u32();
            p.f64s(node.counts);
            if (node.feature >= 0 && (static_cast<std::size_t>(node.feature) >= dim || node.left >= n_nodes ||
                                      node.right >= n_nodes))
              throw Error(ErrorCode::BadModelFile, "decision tree node out of range");
          }
        }
      }
    }
    if (!p.done()) throw Error(ErrorCode::BadModelFile, "parameter section size does not match the metadata");
  } catch (const json::exception &e) {
    throw Error(ErrorCode::BadModelFile, std::string("model metadata is malformed: ") + e.what());
  } catch (const Error &e) {
    if (e.code() == ErrorCode::BadModelFile) throw;
    throw Error(ErrorCode::BadModelFile, std::string("model file is inconsistent: ") + e.what());
  }
  return m;
}

void save_model(const std::filesystem::path &path, const TrainedModel &model) {
  write_file_atomic(path, serialize_model(model));
}

TrainedModel load_model(const std::filesystem::path &path) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const Error &e) {
    throw Error(ErrorCode::BadModelFile, "cannot read model file '" + path.string() + "'");
  }
  return deserialize_model(bytes);
}

}  // namespace sentikit
