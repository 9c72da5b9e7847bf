#include "relspan/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "relspan/checkpoint.hpp"
#include "relspan/evaluator.hpp"

namespace relspan {
namespace {

BoundaryTagging he_targets(const AnnotatedSentence& s,
                           const Vocabularies& vocabs,
                           const ModelConfig& cfg) {
  BoundaryTagging t;
  if (s.triplets.empty()) {
    t.space = TagSpace::kEntity;
    t.start_tags.assign(s.sentence.tokens.size(), 0);
    t.end_tags.assign(s.sentence.tokens.size(), 0);
  } else {
    t = encode_he(s, vocabs.tags);
  }
  return cfg.binary_head_types ? to_binary_tags(std::move(t)) : t;
}

// A span that is not a gold head, for negative-head sampling; single
// token, a handful of draws before giving up on crowded sentences.
bool sample_negative_head(const AnnotatedSentence& s, nn::Rng& rng,
                          EntitySpan* out) {
  const std::vector<EntitySpan> gold = head_spans(s);
  const int n = s.sentence.size();
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int attempt = 0; attempt < 10; ++attempt) {
    const int i = pick(rng);
    const EntitySpan cand{i, i, ""};
    const bool taken = std::any_of(
        gold.begin(), gold.end(),
        [&](const EntitySpan& h) { return h.same_span(cand); });
    if (!taken) {
      *out = cand;
      return true;
    }
  }
  return false;
}

}  // namespace

TrainingInstance make_training_instance(const AnnotatedSentence& s,
                                        int sentence_index,
                                        const Vocabularies& vocabs,
                                        const ModelConfig& cfg, nn::Rng& rng) {
  TrainingInstance inst;
  inst.sentence_index = sentence_index;
  inst.indexed = index_sentence(s.sentence, vocabs, cfg.encoder);
  inst.he_gold = he_targets(s, vocabs, cfg);
  if (!s.triplets.empty()) {
    const std::vector<EntitySpan> heads = head_spans(s);
    std::uniform_int_distribution<std::size_t> pick(0, heads.size() - 1);
    inst.head = heads[pick(rng)];
    inst.ter_gold = encode_ter(s, inst.head, vocabs.tags);
    inst.has_ter = true;
  }
  return inst;
}

std::vector<TrainingInstance> expand_training_instances(
    const AnnotatedSentence& s, int sentence_index, const Vocabularies& vocabs,
    const ModelConfig& cfg) {
  std::vector<TrainingInstance> out;
  const BoundaryTagging he = he_targets(s, vocabs, cfg);
  if (s.triplets.empty()) {
    TrainingInstance inst;
    inst.sentence_index = sentence_index;
    inst.indexed = index_sentence(s.sentence, vocabs, cfg.encoder);
    inst.he_gold = he;
    out.push_back(std::move(inst));
    return out;
  }
  for (const EntitySpan& head : head_spans(s)) {
    TrainingInstance inst;
    inst.sentence_index = sentence_index;
    inst.indexed = index_sentence(s.sentence, vocabs, cfg.encoder);
    inst.he_gold = he;
    inst.head = head;
    inst.ter_gold = encode_ter(s, head, vocabs.tags);
    inst.has_ter = true;
    out.push_back(std::move(inst));
  }
  return out;
}

Trainer::Trainer(JointModel& model, const TrainConfig& cfg)
    : model_(model),
      cfg_(cfg),
      opt_(model.store(), cfg.learning_rate),
      rng_(cfg.seed) {
  cfg.validate();
}

StepLosses Trainer::train_step(
    const std::vector<const AnnotatedSentence*>& batch) {
  if (batch.empty()) throw std::invalid_argument("train_step: empty batch");
  model_.store().zero_grads();
  StepLosses losses;
  double he_sum = 0.0;
  double ter_sum = 0.0;
  std::vector<int> bad_sentences;

  std::vector<TrainingInstance> instances;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const AnnotatedSentence& s = *batch[b];
    const int index = static_cast<int>(b);
    try {
      if (cfg_.repeat_heads) {
        for (TrainingInstance& inst :
             expand_training_instances(s, index, model_.vocabs(),
                                       model_.config())) {
          instances.push_back(std::move(inst));
        }
      } else {
        instances.push_back(make_training_instance(s, index, model_.vocabs(),
                                                   model_.config(), rng_));
      }
      if (cfg_.negative_head_sampling && !s.triplets.empty()) {
        EntitySpan neg;
        if (sample_negative_head(s, rng_, &neg)) {
          TrainingInstance inst;
          inst.sentence_index = index;
          inst.indexed = instances.back().indexed;
          inst.he_gold = instances.back().he_gold;
          inst.head = neg;
          inst.ter_gold.space = TagSpace::kRelation;
          inst.ter_gold.start_tags.assign(s.sentence.tokens.size(), 0);
          inst.ter_gold.end_tags.assign(s.sentence.tokens.size(), 0);
          inst.has_ter = true;
          instances.push_back(std::move(inst));
        }
      }
    } catch (const EncodingConflict&) {
      ++skipped_conflicts_;
    }
  }
  if (instances.empty()) return losses;

  for (const TrainingInstance& inst : instances) {
    nn::Graph g;
    const JointModel::SentenceLoss l = model_.training_loss(
        g, inst.indexed, inst.he_gold, inst.has_ter ? &inst.head : nullptr,
        inst.has_ter ? &inst.ter_gold : nullptr, true, &rng_);
    const double value = g.value(l.node)[0];
    if (!std::isfinite(value)) {
      bad_sentences.push_back(inst.sentence_index);
      continue;
    }
    g.backward(l.node);
    he_sum += l.he;
    ter_sum += l.ter;
    ++losses.instances;
  }
  if (!bad_sentences.empty()) {
    std::ostringstream msg;
    msg << "non-finite loss in batch; sentence indices:";
    for (int i : bad_sentences) msg << ' ' << i;
    throw std::runtime_error(msg.str());
  }

  model_.store().scale_grads(1.0 / losses.instances);
  model_.store().clip_grad_norm(cfg_.grad_clip_norm);
  opt_.step();

  losses.he = he_sum / losses.instances;
  losses.ter = ter_sum / losses.instances;
  losses.total = losses.he + losses.ter;
  return losses;
}

FitResult Trainer::fit(const std::vector<AnnotatedSentence>& train,
                       const std::vector<AnnotatedSentence>& dev,
                       const std::filesystem::path& checkpoint_dir) {
  if (train.empty()) throw std::invalid_argument("fit: empty training corpus");
  if (dev.empty()) throw std::invalid_argument("fit: empty dev corpus");

  FitResult result;
  result.checkpoint_dir = checkpoint_dir;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  double best = -1.0;
  int since_improvement = 0;

  for (int epoch = 1; epoch <= cfg_.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng_);
    double loss_sum = 0.0;
    long steps_this_epoch = 0;
    for (std::size_t at = 0; at < order.size();
         at += static_cast<std::size_t>(cfg_.batch_size)) {
      std::vector<const AnnotatedSentence*> batch;
      const std::size_t hi =
          std::min(order.size(), at + static_cast<std::size_t>(cfg_.batch_size));
      for (std::size_t k = at; k < hi; ++k) batch.push_back(&train[order[k]]);
      const StepLosses l = train_step(batch);
      if (l.instances > 0) {
        loss_sum += l.total;
        ++steps_this_epoch;
      }
    }
    result.steps = opt_.steps_taken();
    result.epochs_run = epoch;

    const std::vector<AnnotatedSentence> preds = predict_corpus(model_, dev);
    const double f1 = score(dev, preds).f1;
    result.dev_f1_by_epoch.push_back(f1);
    if (epoch_callback) {
      epoch_callback(epoch,
                     steps_this_epoch > 0 ? loss_sum / steps_this_epoch : 0.0,
                     f1);
    }

    if (f1 > best) {
      best = f1;
      result.best_dev_f1 = f1;
      result.best_epoch = epoch;
      since_improvement = 0;
      save_checkpoint(checkpoint_dir, model_, cfg_, f1, opt_.steps_taken());
    } else {
      ++since_improvement;
    }
    if (since_improvement > cfg_.patience) break;
  }
  return result;
}

}  // namespace relspan
