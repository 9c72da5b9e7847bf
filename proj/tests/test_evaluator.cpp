#include <doctest.h>

#include <cmath>

#include "relspan/evaluator.hpp"
#include "support/fixtures.hpp"

using namespace relspan;

namespace {

AnnotatedSentence with_triplets(std::vector<std::string> tokens,
                                std::vector<Triplet> triplets) {
  AnnotatedSentence s;
  s.sentence.pos_tags.assign(tokens.size(), "X");
  s.sentence.tokens = std::move(tokens);
  s.triplets = std::move(triplets);
  return s;
}

Triplet t(int hs, int he, const std::string& rel, int ts, int te) {
  return {{hs, he, ""}, rel, {ts, te, ""}};
}

// One sentence, two gold triplets; variants below perturb the predictions.
const std::vector<std::string> kToks = {"a", "b", "c", "d", "e", "f"};

std::vector<AnnotatedSentence> gold_pair() {
  return {with_triplets(kToks, {t(0, 0, "r1", 2, 2), t(0, 0, "r2", 4, 5)})};
}

}  // namespace

TEST_CASE("make_report arithmetic and guards") {
  const ScoreReport r = make_report(4, 2, 1);
  CHECK(r.precision == doctest::Approx(0.5));
  CHECK(r.recall == doctest::Approx(0.25));
  CHECK(r.f1 == doctest::Approx(2 * 0.5 * 0.25 / 0.75));

  const ScoreReport zero = make_report(0, 0, 0);
  CHECK(zero.precision == 0.0);
  CHECK(zero.recall == 0.0);
  CHECK(zero.f1 == 0.0);

  const ScoreReport no_pred = make_report(3, 0, 0);
  CHECK(no_pred.precision == 0.0);
  CHECK(no_pred.recall == 0.0);
  CHECK(no_pred.f1 == 0.0);
}

TEST_CASE("perfect predictions score 1/1/1") {
  const auto gold = gold_pair();
  const ScoreReport r = score(gold, gold);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == 1.0);
  CHECK(r.gold == 2);
  CHECK(r.predicted == 2);
  CHECK(r.correct == 2);
}

TEST_CASE("half right, half missed gives P=R=0.5") {
  const auto gold = gold_pair();
  auto pred = gold;
  // Keep one correct triplet, replace the other with a wrong one.
  pred[0].triplets = {t(0, 0, "r1", 2, 2), t(1, 1, "r2", 4, 5)};
  const ScoreReport r = score(gold, pred);
  CHECK(r.precision == doctest::Approx(0.5));
  CHECK(r.recall == doctest::Approx(0.5));
  CHECK(r.f1 == doctest::Approx(0.5));
}

TEST_CASE("a wrong relation is simply wrong") {
  const auto gold = gold_pair();
  auto pred = gold;
  pred[0].triplets = {t(0, 0, "r9", 2, 2)};
  const ScoreReport r = score(gold, pred);
  CHECK(r.correct == 0);
  CHECK(r.precision == 0.0);
  CHECK(r.recall == 0.0);
}

TEST_CASE("an off-by-one span is simply wrong") {
  const auto gold = gold_pair();
  auto pred = gold;
  pred[0].triplets = {t(0, 0, "r1", 2, 3)};
  const ScoreReport r = score(gold, pred);
  CHECK(r.correct == 0);
  CHECK(r.f1 == 0.0);
}

TEST_CASE("entity types never affect matching") {
  auto gold = gold_pair();
  gold[0].triplets[0].head.entity_type = "PER";
  auto pred = gold_pair();
  pred[0].triplets[0].head.entity_type = "LOC";
  pred[0].triplets.resize(1);
  const ScoreReport r = score(gold, pred);
  CHECK(r.correct == 1);
  CHECK(r.precision == 1.0);
}

TEST_CASE("duplicate predictions count once") {
  const auto gold = gold_pair();
  auto pred = gold_pair();
  pred[0].triplets = {t(0, 0, "r1", 2, 2), t(0, 0, "r1", 2, 2),
                      t(0, 0, "r1", 2, 2)};
  const ScoreReport r = score(gold, pred);
  CHECK(r.predicted == 1);
  CHECK(r.correct == 1);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == doctest::Approx(0.5));
}

TEST_CASE("swapping gold and predictions swaps precision and recall") {
  const auto gold = gold_pair();
  auto pred = gold_pair();
  pred[0].triplets = {t(0, 0, "r1", 2, 2), t(3, 3, "rX", 4, 4),
                      t(1, 1, "rY", 5, 5)};
  const ScoreReport fwd = score(gold, pred);
  const ScoreReport rev = score(pred, gold);
  CHECK(fwd.precision == doctest::Approx(rev.recall));
  CHECK(fwd.recall == doctest::Approx(rev.precision));
  CHECK(fwd.f1 == doctest::Approx(rev.f1));
}

TEST_CASE("triplet order never matters") {
  const auto gold = gold_pair();
  auto pred = gold_pair();
  std::swap(pred[0].triplets[0], pred[0].triplets[1]);
  const ScoreReport r = score(gold, pred);
  CHECK(r.f1 == 1.0);
}

TEST_CASE("matching is per sentence, not global") {
  // The right triplet in the wrong sentence is wrong.
  std::vector<AnnotatedSentence> gold = {
      with_triplets(kToks, {t(0, 0, "r1", 2, 2)}),
      with_triplets(kToks, {t(1, 1, "r2", 3, 3)})};
  std::vector<AnnotatedSentence> pred = {
      with_triplets(kToks, {t(1, 1, "r2", 3, 3)}),
      with_triplets(kToks, {t(0, 0, "r1", 2, 2)})};
  const ScoreReport r = score(gold, pred);
  CHECK(r.correct == 0);
}

TEST_CASE("misaligned corpora are rejected with the sentence index") {
  auto gold = gold_pair();
  auto pred = gold_pair();
  SUBCASE("different sizes") {
    pred.push_back(with_triplets(kToks, {}));
    CHECK_THROWS(score(gold, pred));
  }
  SUBCASE("different tokens") {
    pred[0].sentence.tokens[3] = "changed";
    CHECK_THROWS_WITH_AS(score(gold, pred), doctest::Contains("0"),
                         std::invalid_argument);
  }
}

TEST_CASE("category breakdown partitions the totals") {
  // Normal, SEO and EPO sentences plus one zero-triplet sentence.
  std::vector<AnnotatedSentence> gold = {
      with_triplets(kToks, {t(0, 0, "r1", 2, 2)}),
      with_triplets(kToks, {t(0, 0, "r1", 2, 2), t(0, 0, "r2", 4, 4)}),
      with_triplets(kToks, {t(0, 0, "r1", 2, 2), t(0, 0, "r2", 2, 2)}),
      with_triplets(kToks, {})};
  auto pred = gold;
  pred[1].triplets.resize(1);                            // drop one SEO triplet
  pred[2].triplets = {t(0, 0, "r1", 2, 2)};              // EPO partial
  pred[3].triplets = {t(5, 5, "rZ", 1, 1)};              // spurious

  const auto by_cat = score_by_category(gold, pred);
  REQUIRE(by_cat.count(OverlapCategory::kNormal) == 1);
  REQUIRE(by_cat.count(OverlapCategory::kSeo) == 1);
  REQUIRE(by_cat.count(OverlapCategory::kEpo) == 1);

  CHECK(by_cat.at(OverlapCategory::kNormal).f1 == 1.0);
  CHECK(by_cat.at(OverlapCategory::kSeo).recall == doctest::Approx(0.5));
  CHECK(by_cat.at(OverlapCategory::kEpo).recall == doctest::Approx(0.5));

  // Gold totals across categories add up to the whole corpus, minus the
  // zero-triplet sentence that the breakdown excludes.
  const ScoreReport whole = score(gold, pred);
  long gold_sum = 0, correct_sum = 0;
  for (const auto& [cat, r] : by_cat) {
    gold_sum += r.gold;
    correct_sum += r.correct;
  }
  CHECK(gold_sum == whole.gold);
  CHECK(correct_sum == whole.correct);
}

TEST_CASE("count breakdown partitions the totals") {
  std::vector<AnnotatedSentence> gold = {
      with_triplets(kToks, {t(0, 0, "r1", 2, 2)}),
      with_triplets(kToks, {t(0, 0, "r1", 2, 2), t(3, 3, "r2", 4, 4)}),
      with_triplets(kToks,
                    {t(0, 0, "r1", 1, 1), t(2, 2, "r2", 3, 3),
                     t(4, 4, "r1", 5, 5), t(0, 0, "r2", 2, 2),
                     t(1, 1, "r1", 3, 3)})};
  auto pred = gold;
  pred[2].triplets.resize(2);

  const auto by_count = score_by_count(gold, pred);
  REQUIRE(by_count.count(1) == 1);
  REQUIRE(by_count.count(2) == 1);
  REQUIRE(by_count.count(5) == 1);
  CHECK(by_count.at(1).f1 == 1.0);
  CHECK(by_count.at(2).f1 == 1.0);
  CHECK(by_count.at(5).gold == 5);
  CHECK(by_count.at(5).correct == 2);

  const ScoreReport whole = score(gold, pred);
  long gold_sum = 0, pred_sum = 0, correct_sum = 0;
  for (const auto& [bucket, r] : by_count) {
    gold_sum += r.gold;
    pred_sum += r.predicted;
    correct_sum += r.correct;
  }
  CHECK(gold_sum == whole.gold);
  CHECK(pred_sum == whole.predicted);
  CHECK(correct_sum == whole.correct);
}

TEST_CASE("throughput measurement returns a positive rate") {
  ModelConfig cfg;
  cfg.encoder.word_dim = 4;
  cfg.encoder.char_emb_dim = 3;
  cfg.encoder.char_cnn_filters = 3;
  cfg.encoder.pos_dim = 2;
  cfg.encoder.hidden_dim = 3;
  cfg.tagger_hidden = 3;
  cfg.pse_dim = 2;
  cfg.pht_dim = 2;
  cfg.max_sentence_len = 16;
  JointModel model(cfg, build_vocabularies(testsupport::overfit_corpus()), 9);

  const auto corpus = testsupport::overfit_corpus();
  const double rate = measure_throughput(model, corpus, 4, 1, 1);
  CHECK(rate > 0.0);
  CHECK(std::isfinite(rate));

  CHECK_THROWS(measure_throughput(model, {}, 4));
  CHECK_THROWS(measure_throughput(model, corpus, 0));
}
