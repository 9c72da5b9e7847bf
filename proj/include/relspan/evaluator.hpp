#pragma once

#include <map>
#include <string>
#include <vector>

#include "relspan/corpus.hpp"
#include "relspan/extractors.hpp"

namespace relspan {

// Micro-averaged exact-match scores: a predicted triplet is correct iff
// the same sentence's gold set contains one with identical head span,
// relation and tail span (entity types do not participate).
struct ScoreReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long gold = 0;
  long predicted = 0;
  long correct = 0;
};

ScoreReport make_report(long gold, long predicted, long correct);

// Gold and predictions aligned by index; token sequences must match.
// Duplicate triplets on either side count once.
ScoreReport score(const std::vector<AnnotatedSentence>& gold,
                  const std::vector<AnnotatedSentence>& pred);

// Partition by the gold overlap category; zero-triplet sentences are
// excluded from the breakdown.
std::map<OverlapCategory, ScoreReport> score_by_category(
    const std::vector<AnnotatedSentence>& gold,
    const std::vector<AnnotatedSentence>& pred);

// Partition by gold triplet-count bucket (1..4 and ">=5").
std::map<int, ScoreReport> score_by_count(
    const std::vector<AnnotatedSentence>& gold,
    const std::vector<AnnotatedSentence>& pred);

// Inference-only wall-clock throughput in batches per second: one warm-up
// epoch, then the mean over `timed_epochs` full passes.
double measure_throughput(const JointModel& model,
                          const std::vector<AnnotatedSentence>& corpus,
                          int batch_size, int warmup_epochs = 1,
                          int timed_epochs = 3);

}  // namespace relspan
