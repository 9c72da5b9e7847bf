#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include "relspan/config.hpp"
#include "relspan/extractors.hpp"
#include "relspan/tagset.hpp"

namespace relspan {

// One optimization example: the full HE tagging plus the TER tagging for
// one sampled gold head. Sentences without triplets carry all-"O" HE
// targets and no TER term.
struct TrainingInstance {
  int sentence_index = -1;
  IndexedSentence indexed;
  BoundaryTagging he_gold;
  bool has_ter = false;
  EntitySpan head;
  BoundaryTagging ter_gold;
};

// Samples the TER head uniformly from the gold heads. Throws
// EncodingConflict when the sentence cannot be tagged.
TrainingInstance make_training_instance(const AnnotatedSentence& s,
                                        int sentence_index,
                                        const Vocabularies& vocabs,
                                        const ModelConfig& cfg, nn::Rng& rng);

// One instance per gold head instead of one sampled head.
std::vector<TrainingInstance> expand_training_instances(
    const AnnotatedSentence& s, int sentence_index, const Vocabularies& vocabs,
    const ModelConfig& cfg);

struct StepLosses {
  double total = 0.0;  // == he + ter
  double he = 0.0;
  double ter = 0.0;
  int instances = 0;  // contributing instances; 0 means no update happened
};

struct FitResult {
  double best_dev_f1 = 0.0;
  int best_epoch = -1;  // 1-based; -1 if no epoch improved
  int epochs_run = 0;
  long steps = 0;
  std::vector<double> dev_f1_by_epoch;
  std::filesystem::path checkpoint_dir;
};

class Trainer {
 public:
  Trainer(JointModel& model, const TrainConfig& cfg);

  // Accumulates gradients over the batch, averages, clips the global norm
  // and applies one Adam update. Conflicting sentences are skipped and
  // counted; a non-finite loss aborts naming the sentence indices.
  StepLosses train_step(const std::vector<const AnnotatedSentence*>& batch);

  // Epoch loop with seeded shuffling, per-epoch head resampling, dev
  // evaluation each epoch, best-F1 checkpointing into `checkpoint_dir`
  // and early stopping once `patience` consecutive epochs fail to improve.
  FitResult fit(const std::vector<AnnotatedSentence>& train,
                const std::vector<AnnotatedSentence>& dev,
                const std::filesystem::path& checkpoint_dir);

  long skipped_conflicts() const { return skipped_conflicts_; }
  nn::AdamOptimizer& optimizer() { return opt_; }
  nn::Rng& rng() { return rng_; }

  // Optional per-epoch observer: (epoch, mean loss, dev F1).
  std::function<void(int, double, double)> epoch_callback;

 private:
  JointModel& model_;
  TrainConfig cfg_;
  nn::AdamOptimizer opt_;
  nn::Rng rng_;
  long skipped_conflicts_ = 0;
};

}  // namespace relspan
