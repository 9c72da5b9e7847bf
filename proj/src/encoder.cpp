#include "relspan/encoder.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace relspan {

IndexedSentence index_sentence(const TokenSequence& s, const Vocabularies& v,
                               const EncoderConfig& cfg) {
  IndexedSentence out;
  out.tokens.reserve(s.tokens.size());
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    IndexedToken t;
    t.word = v.token_id(s.tokens[i]);
    t.pos = v.pos_id(i < s.pos_tags.size() ? s.pos_tags[i] : Vocabularies::kUnkPos);
    const std::string& w = s.tokens[i];
    const std::size_t len =
        std::min(w.size(), static_cast<std::size_t>(cfg.char_max_len));
    for (std::size_t c = 0; c < len; ++c) {
      t.chars.push_back(v.char_id(std::string(1, w[c])));
    }
    // Right-pad so every token yields at least one CNN window.
    while (t.chars.size() < static_cast<std::size_t>(cfg.char_cnn_window)) {
      t.chars.push_back(0);
    }
    out.tokens.push_back(std::move(t));
  }
  return out;
}

Encoder::Encoder(nn::ParamStore& store, const EncoderConfig& cfg,
                 const Vocabularies& vocabs, nn::Rng& rng,
                 const std::string& prefix)
    : cfg_(cfg) {
  word_emb_ = store.add(prefix + "/word_emb",
                         static_cast<int>(vocabs.tokens.size()), cfg.word_dim);
  nn::init_glorot(*word_emb_, rng);
  word_emb_->frozen = cfg.freeze_word_vectors;
  if (cfg.use_char) {
    char_emb_ = store.add(prefix + "/char_emb",
                           static_cast<int>(vocabs.chars.size()),
                           cfg.char_emb_dim);
    nn::init_glorot(*char_emb_, rng);
    cnn_w_ = store.add(prefix + "/cnn/W", cfg.char_cnn_filters,
                        cfg.char_cnn_window * cfg.char_emb_dim);
    nn::init_glorot(*cnn_w_, rng);
    cnn_b_ = store.add(prefix + "/cnn/b", cfg.char_cnn_filters, 1);
  }
  pos_emb_ = store.add(prefix + "/pos_emb",
                        static_cast<int>(vocabs.pos.size()), cfg.pos_dim);
  nn::init_glorot(*pos_emb_, rng);
  bilstm_ = nn::make_bilstm(store, prefix + "/bilstm", cfg.feature_dim(),
                            cfg.hidden_dim, rng);
}

std::vector<int> Encoder::embed_tokens(nn::Graph& g, const IndexedSentence& s,
                                       bool training,
                                       nn::Rng* dropout_rng) const {
  const bool drop = training && cfg_.dropout > 0.0;
  if (drop && dropout_rng == nullptr) {
    throw std::invalid_argument("embed_tokens: dropout requires an rng");
  }
  std::vector<int> feats;
  feats.reserve(s.tokens.size());
  for (const IndexedToken& t : s.tokens) {
    std::vector<int> parts;
    parts.push_back(g.lookup(*word_emb_, t.word));
    if (cfg_.use_char) {
      std::vector<int> windows;
      const int nwin =
          static_cast<int>(t.chars.size()) - cfg_.char_cnn_window + 1;
      for (int p = 0; p < nwin; ++p) {
        std::vector<int> chars;
        chars.reserve(cfg_.char_cnn_window);
        for (int k = 0; k < cfg_.char_cnn_window; ++k) {
          chars.push_back(g.lookup(*char_emb_, t.chars[p + k]));
        }
        windows.push_back(g.tanh_of(g.affine(*cnn_w_, *cnn_b_, g.concat(chars))));
      }
      parts.push_back(g.max_many(windows));
    }
    parts.push_back(g.lookup(*pos_emb_, t.pos));
    int x = g.concat(parts);
    if (drop) x = g.dropout(x, cfg_.dropout, *dropout_rng);
    feats.push_back(x);
  }
  return feats;
}

EncodedSentence Encoder::encode(nn::Graph& g, std::span<const int> features,
                                bool training, nn::Rng* dropout_rng) const {
  const bool drop = training && cfg_.dropout > 0.0;
  if (drop && dropout_rng == nullptr) {
    throw std::invalid_argument("encode: dropout requires an rng");
  }
  EncodedSentence out;
  out.hidden = nn::run_bilstm(g, bilstm_, features);
  if (drop) {
    for (int& h : out.hidden) h = g.dropout(h, cfg_.dropout, *dropout_rng);
  }
  out.global = g.max_many(out.hidden);
  ++passes_;
  return out;
}

std::size_t Encoder::load_pretrained_vectors(const std::filesystem::path& path,
                                             const Vocabularies& vocabs) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open vector file: " + path.string());
  }
  std::size_t loaded = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    const int id = vocabs.tokens.id(token);
    if (id < 0) continue;
    for (int d = 0; d < cfg_.word_dim; ++d) {
      if (!(ss >> word_emb_->value.at(id, d))) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                 ": expected " + std::to_string(cfg_.word_dim) +
                                 " vector components");
      }
    }
    double extra;
    if (ss >> extra) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": vector wider than word_dim");
    }
    ++loaded;
  }
  return loaded;
}

}  // namespace relspan
