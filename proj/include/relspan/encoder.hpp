#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "relspan/corpus.hpp"
#include "relspan/nn/graph.hpp"
#include "relspan/nn/lstm.hpp"
#include "relspan/vocab.hpp"

namespace relspan {

struct EncoderConfig {
  int word_dim = 300;
  int char_emb_dim = 30;
  int char_cnn_window = 3;
  int char_cnn_filters = 50;
  int pos_dim = 30;
  int hidden_dim = 100;  // per direction
  int char_max_len = 25;
  double dropout = 0.4;
  bool use_char = true;
  bool freeze_word_vectors = false;

  int feature_dim() const {
    return word_dim + (use_char ? char_cnn_filters : 0) + pos_dim;
  }
};

struct IndexedToken {
  int word = 0;
  std::vector<int> chars;  // padded to >= the CNN window, capped
  int pos = 0;
};

struct IndexedSentence {
  std::vector<IndexedToken> tokens;
  int size() const { return static_cast<int>(tokens.size()); }
};

IndexedSentence index_sentence(const TokenSequence& s, const Vocabularies& v,
                               const EncoderConfig& cfg);

// Graph node ids of the per-token hidden states and the max-pooled global
// vector.
struct EncodedSentence {
  std::vector<int> hidden;
  int global = -1;
};

class Encoder {
 public:
  Encoder(nn::ParamStore& store, const EncoderConfig& cfg,
          const Vocabularies& vocabs, nn::Rng& rng,
          const std::string& prefix = "enc");

  // x_i = [word embedding; char-CNN features; POS embedding], with dropout
  // on the concatenation while training.
  std::vector<int> embed_tokens(nn::Graph& g, const IndexedSentence& s,
                                bool training, nn::Rng* dropout_rng) const;

  // Shared BiLSTM pass plus dimension-wise max pooling for the global
  // vector. Dropout applies to hidden states while training.
  EncodedSentence encode(nn::Graph& g, std::span<const int> features,
                         bool training, nn::Rng* dropout_rng) const;

  // Replaces word-embedding rows for vocabulary tokens found in a
  // whitespace-separated text vector file; returns how many were loaded.
  std::size_t load_pretrained_vectors(const std::filesystem::path& path,
                                      const Vocabularies& vocabs);

  long passes() const { return passes_; }
  void reset_passes() { passes_ = 0; }

  const EncoderConfig& config() const { return cfg_; }
  nn::Param* word_embeddings() { return word_emb_; }
  nn::BiLstm& bilstm() { return bilstm_; }

 private:
  EncoderConfig cfg_;
  nn::Param* word_emb_ = nullptr;
  nn::Param* char_emb_ = nullptr;
  nn::Param* cnn_w_ = nullptr;
  nn::Param* cnn_b_ = nullptr;
  nn::Param* pos_emb_ = nullptr;
  nn::BiLstm bilstm_;
  mutable long passes_ = 0;
};

}  // namespace relspan
