#include "relspan/evaluator.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace relspan {
namespace {

std::vector<Triplet> dedupe(const std::vector<Triplet>& ts) {
  std::vector<Triplet> out;
  for (const Triplet& t : ts) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Triplet& h) {
      return same_triplet(h, t);
    });
    if (!dup) out.push_back(t);
  }
  return out;
}

void check_aligned(const std::vector<AnnotatedSentence>& gold,
                   const std::vector<AnnotatedSentence>& pred) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument(
        "gold/pred sentence counts differ: " + std::to_string(gold.size()) +
        " vs " + std::to_string(pred.size()));
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].sentence.tokens != pred[i].sentence.tokens) {
      throw std::invalid_argument("gold/pred misaligned at sentence " +
                                  std::to_string(i));
    }
  }
}

struct Counts {
  long gold = 0;
  long predicted = 0;
  long correct = 0;

  void accumulate(const AnnotatedSentence& g, const AnnotatedSentence& p) {
    const std::vector<Triplet> gt = dedupe(g.triplets);
    const std::vector<Triplet> pt = dedupe(p.triplets);
    gold += static_cast<long>(gt.size());
    predicted += static_cast<long>(pt.size());
    for (const Triplet& t : pt) {
      correct += std::any_of(gt.begin(), gt.end(), [&](const Triplet& g2) {
        return same_triplet(g2, t);
      });
    }
  }
};

}  // namespace

ScoreReport make_report(long gold, long predicted, long correct) {
  ScoreReport r;
  r.gold = gold;
  r.predicted = predicted;
  r.correct = correct;
  r.precision = predicted > 0 ? static_cast<double>(correct) / predicted : 0.0;
  r.recall = gold > 0 ? static_cast<double>(correct) / gold : 0.0;
  r.f1 = (r.precision + r.recall) > 0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

ScoreReport score(const std::vector<AnnotatedSentence>& gold,
                  const std::vector<AnnotatedSentence>& pred) {
  check_aligned(gold, pred);
  Counts c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    c.accumulate(gold[i], pred[i]);
  }
  return make_report(c.gold, c.predicted, c.correct);
}

std::map<OverlapCategory, ScoreReport> score_by_category(
    const std::vector<AnnotatedSentence>& gold,
    const std::vector<AnnotatedSentence>& pred) {
  check_aligned(gold, pred);
  std::map<OverlapCategory, Counts> parts;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].triplets.empty()) continue;
    parts[categorize_sentence(gold[i])].accumulate(gold[i], pred[i]);
  }
  std::map<OverlapCategory, ScoreReport> out;
  for (const auto& [cat, c] : parts) {
    out[cat] = make_report(c.gold, c.predicted, c.correct);
  }
  return out;
}

std::map<int, ScoreReport> score_by_count(
    const std::vector<AnnotatedSentence>& gold,
    const std::vector<AnnotatedSentence>& pred) {
  check_aligned(gold, pred);
  std::map<int, Counts> parts;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].triplets.empty()) continue;
    parts[triplet_count_bucket(gold[i])].accumulate(gold[i], pred[i]);
  }
  std::map<int, ScoreReport> out;
  for (const auto& [bucket, c] : parts) {
    out[bucket] = make_report(c.gold, c.predicted, c.correct);
  }
  return out;
}

double measure_throughput(const JointModel& model,
                          const std::vector<AnnotatedSentence>& corpus,
                          int batch_size, int warmup_epochs,
                          int timed_epochs) {
  if (corpus.empty()) throw std::invalid_argument("throughput: empty corpus");
  if (batch_size < 1) throw std::invalid_argument("throughput: batch_size < 1");
  if (timed_epochs < 1) throw std::invalid_argument("throughput: timed_epochs < 1");
  const long batches =
      (static_cast<long>(corpus.size()) + batch_size - 1) / batch_size;
  const auto run_epoch = [&] {
    for (const AnnotatedSentence& s : corpus) {
      (void)model.extract_triplets(s.sentence);
    }
  };
  for (int i = 0; i < warmup_epochs; ++i) run_epoch();
  double total = 0.0;
  for (int i = 0; i < timed_epochs; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    run_epoch();
    const std::chrono::duration<double> dt =
        std::chrono::steady_clock::now() - t0;
    total += static_cast<double>(batches) / std::max(dt.count(), 1e-9);
  }
  return total / timed_epochs;
}

}  // namespace relspan
