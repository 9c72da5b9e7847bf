#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "relspan/nn/graph.hpp"
#include "relspan/nn/lstm.hpp"
#include "relspan/tagset.hpp"

namespace relspan {

struct TaggerConfig {
  int base_dim = 0;   // width of h_i
  int aux_dim = 0;    // width of a_i
  int hidden = 100;   // per direction of each tagging BiLSTM
  int tag_count = 0;  // includes the outside tag
  int pse_dim = 30;
  int distance_constant = 0;  // C, also the no-preceding-start sentinel
  bool hierarchical = true;
};

// Node ids produced by the start-tagging layer; states feed the end layer.
struct StartForward {
  std::vector<int> states;
  std::vector<int> logits;
};

// Start/end boundary tagger. The start layer runs a BiLSTM over [h_i; a_i]
// and projects to tag logits; the end layer runs a second BiLSTM over
// [state_i; a_i; position-embedding(distance_i)]. With hierarchical=false
// both tag sets are projected from the single BiLSTM's states.
class BoundaryTagger {
 public:
  enum class DistanceSource { kGold, kPredicted };

  BoundaryTagger(nn::ParamStore& store, const TaggerConfig& cfg,
                 const std::string& prefix, nn::Rng& rng);

  StartForward forward_start(nn::Graph& g, std::span<const int> base,
                             std::span<const int> aux) const;
  std::vector<int> forward_end(nn::Graph& g, std::span<const int> start_states,
                               std::span<const int> aux,
                               const StartDistanceSequence& distances) const;

  // Mean negative log-likelihood over both boundary layers. Distances are
  // always derived from the gold start tags, never from predictions.
  struct LossNodes {
    int loss = -1;
    std::vector<int> start_nll;
    std::vector<int> end_nll;
  };
  LossNodes training_loss(nn::Graph& g, std::span<const int> base,
                          std::span<const int> aux,
                          const BoundaryTagging& gold) const;

  // Greedy tagging plus multi-span decoding. Distances are derived from the
  // predicted start tags.
  DecodeResult extract(nn::Graph& g, std::span<const int> base,
                       std::span<const int> aux, TagSpace space) const;

  long tagging_passes() const { return passes_; }
  void reset_passes() { passes_ = 0; }

  // Test hook: observes which distance sequence fed the end layer.
  mutable std::function<void(DistanceSource, const std::vector<int>&)>
      distance_probe;

  const TaggerConfig& config() const { return cfg_; }

 private:
  std::vector<int> argmax_tags(nn::Graph& g,
                               const std::vector<int>& logits) const;

  TaggerConfig cfg_;
  nn::BiLstm start_lstm_;
  nn::BiLstm end_lstm_;  // unused when hierarchical=false
  nn::Param* pse_ = nullptr;
  nn::Param* w_start_ = nullptr;
  nn::Param* b_start_ = nullptr;
  nn::Param* w_end_ = nullptr;
  nn::Param* b_end_ = nullptr;
  mutable long passes_ = 0;
};

// Closed-form counterpart of the tagger loss for fixture tests: mean of
// -log p over both boundary distributions.
double boundary_loss_from_distributions(
    const std::vector<std::vector<double>>& start_probs,
    const std::vector<std::vector<double>>& end_probs,
    const std::vector<int>& gold_start, const std::vector<int>& gold_end);

}  // namespace relspan
