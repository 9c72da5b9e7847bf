#include "relspan/extractors.hpp"

#include <algorithm>
#include <stdexcept>

namespace relspan {

JointModel::JointModel(const ModelConfig& cfg, Vocabularies vocabs,
                       std::uint64_t seed)
    : cfg_(cfg), vocabs_(std::move(vocabs)) {
  nn::Rng rng(seed);
  encoder_ = std::make_unique<Encoder>(store_, cfg.encoder, vocabs_, rng, "enc");
  if (cfg.pipeline_mode) {
    pipeline_encoder_ =
        std::make_unique<Encoder>(store_, cfg.encoder, vocabs_, rng, "enc_ter");
  }
  const int state_dim = 2 * cfg.encoder.hidden_dim;
  TaggerConfig he_cfg;
  he_cfg.base_dim = state_dim;
  he_cfg.aux_dim = state_dim;  // g
  he_cfg.hidden = cfg.tagger_hidden;
  he_cfg.tag_count = he_tag_count();
  he_cfg.pse_dim = cfg.pse_dim;
  he_cfg.distance_constant = cfg.max_sentence_len;
  he_cfg.hierarchical = !cfg.no_hierarchy;
  he_ = std::make_unique<BoundaryTagger>(store_, he_cfg, "he", rng);

  TaggerConfig ter_cfg = he_cfg;
  // a_i = [g; h^h] plus the head-relative position embedding.
  ter_cfg.aux_dim = state_dim + 2 * state_dim + (cfg.no_pht ? 0 : cfg.pht_dim);
  ter_cfg.tag_count = ter_tag_count();
  ter_ = std::make_unique<BoundaryTagger>(store_, ter_cfg, "ter", rng);

  if (!cfg.no_pht) {
    pht_ = store_.add("pht", 2 * cfg.max_sentence_len + 1, cfg.pht_dim);
    nn::init_glorot(*pht_, rng);
  }
}

int JointModel::he_tag_count() const {
  return cfg_.binary_head_types ? 2 : vocabs_.tags.entity_types.size();
}

int JointModel::ter_tag_count() const {
  return vocabs_.tags.relation_types.size();
}

std::string JointModel::entity_label(int tag_id) const {
  if (tag_id == TagVocabulary::kOutsideId) return TagVocabulary::kOutsideLabel;
  if (cfg_.binary_head_types) return kBinaryEntityLabel;
  return vocabs_.tags.entity_types.label(tag_id);
}

std::string JointModel::relation_label(int tag_id) const {
  return vocabs_.tags.relation_types.label(tag_id);
}

EncodedSentence JointModel::encode(nn::Graph& g, const IndexedSentence& s,
                                   bool training, nn::Rng* dropout_rng) const {
  std::vector<int> feats =
      encoder_->embed_tokens(g, s, training, dropout_rng);
  return encoder_->encode(g, feats, training, dropout_rng);
}

std::vector<int> JointModel::he_aux(nn::Graph& g,
                                    const EncodedSentence& enc) const {
  (void)g;
  return std::vector<int>(enc.hidden.size(), enc.global);
}

std::vector<int> JointModel::ter_aux(nn::Graph& g, const EncodedSentence& enc,
                                     const EntitySpan& head) const {
  const int n = static_cast<int>(enc.hidden.size());
  if (head.start < 0 || head.start > head.end || head.end >= n) {
    throw std::invalid_argument("ter_aux: head span out of range");
  }
  const int hh = g.concat2(enc.hidden[head.start], enc.hidden[head.end]);
  const int shared = g.concat2(enc.global, hh);
  std::vector<int> aux;
  aux.reserve(n);
  const int anchor = cfg_.head_distance_anchor == HeadAnchor::kStart
                         ? head.start
                         : head.end;
  const int bound = cfg_.max_sentence_len;
  for (int i = 0; i < n; ++i) {
    if (cfg_.no_pht) {
      aux.push_back(shared);
    } else {
      const int d = std::clamp(i - anchor, -bound, bound) + bound;
      aux.push_back(g.concat2(shared, g.lookup(*pht_, d)));
    }
  }
  return aux;
}

DecodeResult JointModel::extract_heads(nn::Graph& g,
                                       const EncodedSentence& enc) const {
  return he_->extract(g, enc.hidden, he_aux(g, enc), TagSpace::kEntity);
}

DecodeResult JointModel::extract_tails(nn::Graph& g,
                                       const EncodedSentence& enc,
                                       const EntitySpan& head) const {
  return ter_->extract(g, enc.hidden, ter_aux(g, enc, head),
                       TagSpace::kRelation);
}

std::vector<Triplet> JointModel::extract_triplets(
    const TokenSequence& s, ExtractionDiagnostics* diag) const {
  if (s.size() == 0) return {};
  if (s.size() > cfg_.max_sentence_len) {
    throw std::invalid_argument(
        "sentence of length " + std::to_string(s.size()) +
        " exceeds max_sentence_len " + std::to_string(cfg_.max_sentence_len));
  }
  nn::Graph g;
  const IndexedSentence idx = index_sentence(s, vocabs_, cfg_.encoder);
  const EncodedSentence enc = encode(g, idx, false, nullptr);
  const DecodeResult heads = extract_heads(g, enc);

  const EncodedSentence* ter_enc = &enc;
  EncodedSentence enc2;
  if (pipeline_encoder_ && !heads.spans.empty()) {
    std::vector<int> feats =
        pipeline_encoder_->embed_tokens(g, idx, false, nullptr);
    enc2 = pipeline_encoder_->encode(g, feats, false, nullptr);
    ter_enc = &enc2;
  }

  std::vector<Triplet> out;
  int dropped = heads.dropped_starts;
  for (const TypedSpan& h : heads.spans) {
    const EntitySpan head{h.start, h.end, ""};
    const DecodeResult tails = extract_tails(g, *ter_enc, head);
    dropped += tails.dropped_starts;
    for (const TypedSpan& t : tails.spans) {
      Triplet tr;
      tr.head = head;
      tr.relation = relation_label(t.label);
      tr.tail = EntitySpan{t.start, t.end, ""};
      const bool dup = std::any_of(
          out.begin(), out.end(),
          [&](const Triplet& have) { return same_triplet(have, tr); });
      if (!dup) out.push_back(std::move(tr));
    }
  }
  if (diag) {
    diag->head_count = static_cast<int>(heads.spans.size());
    diag->dropped_start_tags = dropped;
  }
  return out;
}

JointModel::SentenceLoss JointModel::training_loss(
    nn::Graph& g, const IndexedSentence& s, const BoundaryTagging& he_gold,
    const EntitySpan* ter_head, const BoundaryTagging* ter_gold, bool training,
    nn::Rng* dropout_rng) const {
  const EncodedSentence enc = encode(g, s, training, dropout_rng);
  const BoundaryTagger::LossNodes he_loss =
      he_->training_loss(g, enc.hidden, he_aux(g, enc), he_gold);

  SentenceLoss out;
  out.he = g.value(he_loss.loss)[0];
  std::vector<int> terms{he_loss.loss};
  if (ter_head != nullptr && ter_gold != nullptr) {
    const EncodedSentence* ter_enc = &enc;
    EncodedSentence enc2;
    if (pipeline_encoder_) {
      std::vector<int> feats =
          pipeline_encoder_->embed_tokens(g, s, training, dropout_rng);
      enc2 = pipeline_encoder_->encode(g, feats, training, dropout_rng);
      ter_enc = &enc2;
    }
    const BoundaryTagger::LossNodes ter_loss = ter_->training_loss(
        g, ter_enc->hidden, ter_aux(g, *ter_enc, *ter_head), *ter_gold);
    out.ter = g.value(ter_loss.loss)[0];
    terms.push_back(ter_loss.loss);
  }
  out.node = g.sum_scaled(terms, 1.0);
  return out;
}

long JointModel::encoder_passes() const {
  long n = encoder_->passes();
  if (pipeline_encoder_) n += pipeline_encoder_->passes();
  return n;
}

long JointModel::tagging_passes() const {
  return he_->tagging_passes() + ter_->tagging_passes();
}

void JointModel::reset_pass_counters() {
  encoder_->reset_passes();
  if (pipeline_encoder_) pipeline_encoder_->reset_passes();
  he_->reset_passes();
  ter_->reset_passes();
}

BoundaryTagging to_binary_tags(BoundaryTagging t) {
  for (int& v : t.start_tags) v = v == 0 ? 0 : 1;
  for (int& v : t.end_tags) v = v == 0 ? 0 : 1;
  return t;
}

std::vector<AnnotatedSentence> predict_corpus(
    const JointModel& model, const std::vector<AnnotatedSentence>& data) {
  std::vector<AnnotatedSentence> out;
  out.reserve(data.size());
  for (const AnnotatedSentence& s : data) {
    AnnotatedSentence p;
    p.sentence = s.sentence;
    p.triplets = model.extract_triplets(s.sentence);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace relspan
