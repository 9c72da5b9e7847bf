#include "relspan/hbt.hpp"

#include <cmath>
#include <stdexcept>

#include "relspan/nn/kernels.hpp"

namespace relspan {

BoundaryTagger::BoundaryTagger(nn::ParamStore& store, const TaggerConfig& cfg,
                               const std::string& prefix, nn::Rng& rng)
    : cfg_(cfg) {
  if (cfg.tag_count < 1) throw std::invalid_argument("tag_count must be >= 1");
  const int in_dim = cfg.base_dim + cfg.aux_dim;
  start_lstm_ = nn::make_bilstm(store, prefix + "/start", in_dim, cfg.hidden, rng);
  const int state_dim = 2 * cfg.hidden;
  if (cfg.hierarchical) {
    end_lstm_ = nn::make_bilstm(store, prefix + "/end",
                                state_dim + cfg.aux_dim + cfg.pse_dim,
                                cfg.hidden, rng);
    pse_ = store.add(prefix + "/pse", cfg.distance_constant + 1, cfg.pse_dim);
    nn::init_glorot(*pse_, rng);
  }
  w_start_ = store.add(prefix + "/proj_start/W", cfg.tag_count, state_dim);
  nn::init_glorot(*w_start_, rng);
  b_start_ = store.add(prefix + "/proj_start/b", cfg.tag_count, 1);
  w_end_ = store.add(prefix + "/proj_end/W", cfg.tag_count, state_dim);
  nn::init_glorot(*w_end_, rng);
  b_end_ = store.add(prefix + "/proj_end/b", cfg.tag_count, 1);
}

StartForward BoundaryTagger::forward_start(nn::Graph& g,
                                           std::span<const int> base,
                                           std::span<const int> aux) const {
  if (base.size() != aux.size()) {
    throw std::invalid_argument("forward_start: base/aux length mismatch");
  }
  std::vector<int> inputs;
  inputs.reserve(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    inputs.push_back(g.concat2(base[i], aux[i]));
  }
  StartForward out;
  out.states = nn::run_bilstm(g, start_lstm_, inputs);
  out.logits.reserve(out.states.size());
  for (int s : out.states) {
    out.logits.push_back(g.affine(*w_start_, *b_start_, s));
  }
  ++passes_;
  return out;
}

std::vector<int> BoundaryTagger::forward_end(
    nn::Graph& g, std::span<const int> start_states, std::span<const int> aux,
    const StartDistanceSequence& distances) const {
  if (start_states.size() != aux.size()) {
    throw std::invalid_argument("forward_end: states/aux length mismatch");
  }
  std::vector<int> states;
  if (cfg_.hierarchical) {
    if (distances.values.size() != start_states.size()) {
      throw std::invalid_argument("forward_end: distance length mismatch");
    }
    std::vector<int> inputs;
    inputs.reserve(start_states.size());
    for (std::size_t i = 0; i < start_states.size(); ++i) {
      const int d = distances.values[i];
      if (d < 0 || d > cfg_.distance_constant) {
        throw std::invalid_argument(
            "forward_end: distance " + std::to_string(d) +
            " outside [0, " + std::to_string(cfg_.distance_constant) + "]");
      }
      inputs.push_back(
          g.concat3(start_states[i], aux[i], g.lookup(*pse_, d)));
    }
    states = nn::run_bilstm(g, end_lstm_, inputs);
  } else {
    states.assign(start_states.begin(), start_states.end());
  }
  std::vector<int> logits;
  logits.reserve(states.size());
  for (int s : states) logits.push_back(g.affine(*w_end_, *b_end_, s));
  ++passes_;
  return logits;
}

BoundaryTagger::LossNodes BoundaryTagger::training_loss(
    nn::Graph& g, std::span<const int> base, std::span<const int> aux,
    const BoundaryTagging& gold) const {
  const std::size_t n = base.size();
  if (static_cast<std::size_t>(gold.size()) != n) {
    throw std::invalid_argument("training_loss: gold length mismatch");
  }
  if (n == 0) throw std::invalid_argument("training_loss: empty sentence");
  StartForward sf = forward_start(g, base, aux);
  const StartDistanceSequence dist =
      start_distances(gold.start_tags, cfg_.distance_constant);
  if (distance_probe) distance_probe(DistanceSource::kGold, dist.values);
  const std::vector<int> end_logits = forward_end(g, sf.states, aux, dist);

  LossNodes out;
  std::vector<int> terms;
  terms.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.start_nll.push_back(g.nll(sf.logits[i], gold.start_tags[i]));
    terms.push_back(out.start_nll.back());
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.end_nll.push_back(g.nll(end_logits[i], gold.end_tags[i]));
    terms.push_back(out.end_nll.back());
  }
  out.loss = g.sum_scaled(terms, 1.0 / static_cast<double>(n));
  return out;
}

std::vector<int> BoundaryTagger::argmax_tags(
    nn::Graph& g, const std::vector<int>& logits) const {
  std::vector<int> tags;
  tags.reserve(logits.size());
  for (int node : logits) {
    tags.push_back(static_cast<int>(kernels::argmax(g.value(node))));
  }
  return tags;
}

DecodeResult BoundaryTagger::extract(nn::Graph& g, std::span<const int> base,
                                     std::span<const int> aux,
                                     TagSpace space) const {
  StartForward sf = forward_start(g, base, aux);
  BoundaryTagging tagging;
  tagging.space = space;
  tagging.start_tags = argmax_tags(g, sf.logits);
  const StartDistanceSequence dist =
      start_distances(tagging.start_tags, cfg_.distance_constant);
  if (distance_probe) distance_probe(DistanceSource::kPredicted, dist.values);
  tagging.end_tags = argmax_tags(g, forward_end(g, sf.states, aux, dist));
  return decode(tagging);
}

double boundary_loss_from_distributions(
    const std::vector<std::vector<double>>& start_probs,
    const std::vector<std::vector<double>>& end_probs,
    const std::vector<int>& gold_start, const std::vector<int>& gold_end) {
  const std::size_t n = start_probs.size();
  if (end_probs.size() != n || gold_start.size() != n || gold_end.size() != n) {
    throw std::invalid_argument("distribution/gold length mismatch");
  }
  if (n == 0) throw std::invalid_argument("empty sentence");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total -= std::log(std::max(start_probs[i].at(gold_start[i]), 1e-12));
    total -= std::log(std::max(end_probs[i].at(gold_end[i]), 1e-12));
  }
  return total / static_cast<double>(n);
}

}  // namespace relspan
