#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "relspan/corpus.hpp"
#include "relspan/encoder.hpp"
#include "relspan/hbt.hpp"
#include "relspan/nn/graph.hpp"
#include "relspan/tagset.hpp"
#include "relspan/vocab.hpp"

namespace relspan {

enum class HeadAnchor { kStart, kEnd };

struct ModelConfig {
  EncoderConfig encoder;
  int tagger_hidden = 100;  // per direction of each tagging BiLSTM
  int pse_dim = 30;
  int pht_dim = 30;
  // Distance constant C for the start-distance feature and the clipping
  // bound for head-relative positions; must cover the longest sentence.
  int max_sentence_len = 120;
  bool no_pht = false;
  bool no_hierarchy = false;
  bool binary_head_types = false;
  bool pipeline_mode = false;  // separate encoder per extractor, no sharing
  HeadAnchor head_distance_anchor = HeadAnchor::kStart;
};

struct ExtractionDiagnostics {
  int head_count = 0;
  int dropped_start_tags = 0;  // starts with no matching end, both layers
};

// Shared encoder plus the head-entity and tail-and-relation taggers.
// The HE tagger reads [h_i; g]; the TER tagger reads [h_i; g; h^h; p^ht_i]
// conditioned on one head span.
class JointModel {
 public:
  static constexpr const char* kBinaryEntityLabel = "ENT";

  JointModel(const ModelConfig& cfg, Vocabularies vocabs, std::uint64_t seed);

  EncodedSentence encode(nn::Graph& g, const IndexedSentence& s, bool training,
                         nn::Rng* dropout_rng) const;

  // Auxiliary feature a_i = g for every token.
  std::vector<int> he_aux(nn::Graph& g, const EncodedSentence& enc) const;
  // Auxiliary feature a_i = [g; h^h; p^ht_i] for the given head span.
  std::vector<int> ter_aux(nn::Graph& g, const EncodedSentence& enc,
                           const EntitySpan& head) const;

  DecodeResult extract_heads(nn::Graph& g, const EncodedSentence& enc) const;
  DecodeResult extract_tails(nn::Graph& g, const EncodedSentence& enc,
                             const EntitySpan& head) const;

  // Encode once, extract heads, then tails per head; assembles deduplicated
  // triplets with entity types omitted.
  std::vector<Triplet> extract_triplets(
      const TokenSequence& s, ExtractionDiagnostics* diag = nullptr) const;

  // Joint loss for one sentence: HE term plus, when a head is supplied,
  // the TER term. The returned node value equals he + ter exactly.
  struct SentenceLoss {
    int node = -1;
    double he = 0.0;
    double ter = 0.0;
  };
  SentenceLoss training_loss(nn::Graph& g, const IndexedSentence& s,
                             const BoundaryTagging& he_gold,
                             const EntitySpan* ter_head,
                             const BoundaryTagging* ter_gold, bool training,
                             nn::Rng* dropout_rng) const;

  // Tag-id to label-string interpretation for decoded spans.
  std::string entity_label(int tag_id) const;
  std::string relation_label(int tag_id) const;
  int he_tag_count() const;
  int ter_tag_count() const;

  long encoder_passes() const;
  long tagging_passes() const;
  void reset_pass_counters();

  const ModelConfig& config() const { return cfg_; }
  const Vocabularies& vocabs() const { return vocabs_; }
  nn::ParamStore& store() { return store_; }
  const nn::ParamStore& store() const { return store_; }
  Encoder& encoder() { return *encoder_; }
  Encoder* ter_encoder() { return pipeline_encoder_ ? pipeline_encoder_.get()
                                                    : encoder_.get(); }
  BoundaryTagger& he_tagger() { return *he_; }
  BoundaryTagger& ter_tagger() { return *ter_; }
  nn::Param* pht_table() { return pht_; }

 private:
  ModelConfig cfg_;
  Vocabularies vocabs_;
  nn::ParamStore store_;
  std::unique_ptr<Encoder> encoder_;
  std::unique_ptr<Encoder> pipeline_encoder_;  // only in pipeline mode
  std::unique_ptr<BoundaryTagger> he_;
  std::unique_ptr<BoundaryTagger> ter_;
  nn::Param* pht_ = nullptr;  // absent under no_pht
};

// Maps a gold head-entity tagging onto {O, entity} ids for the
// binary-head-types ablation.
BoundaryTagging to_binary_tags(BoundaryTagging t);

// Runs extraction over a corpus, echoing tokens and POS tags.
std::vector<AnnotatedSentence> predict_corpus(
    const JointModel& model, const std::vector<AnnotatedSentence>& data);

}  // namespace relspan
