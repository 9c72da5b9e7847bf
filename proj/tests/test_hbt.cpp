#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "relspan/hbt.hpp"
#include "support/reference.hpp"

using namespace relspan;

namespace {

TaggerConfig tiny_config(int tags, bool hierarchical = true) {
  TaggerConfig cfg;
  cfg.base_dim = 3;
  cfg.aux_dim = 2;
  cfg.hidden = 4;
  cfg.tag_count = tags;
  cfg.pse_dim = 3;
  cfg.distance_constant = 10;
  cfg.hierarchical = hierarchical;
  return cfg;
}

// Deterministic pseudo-features for a sentence of length n.
std::vector<std::vector<double>> base_features(int n, int dim, double shift) {
  std::vector<std::vector<double>> out;
  for (int i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (int d = 0; d < dim; ++d)
      v[d] = std::sin(0.7 * (i + 1) * (d + 1) + shift);
    out.push_back(std::move(v));
  }
  return out;
}

struct Inputs {
  std::vector<int> base;
  std::vector<int> aux;
};

Inputs feed(nn::Graph& g, const std::vector<std::vector<double>>& base,
            const std::vector<std::vector<double>>& aux) {
  Inputs in;
  for (const auto& v : base) in.base.push_back(g.input(v));
  for (const auto& v : aux) in.aux.push_back(g.input(v));
  return in;
}

void zero_all(nn::ParamStore& store) {
  for (const auto& p : store.params()) {
    p->value.zero();
  }
}

}  // namespace

TEST_CASE("start layer emits one logit vector per token") {
  nn::ParamStore store;
  nn::Rng rng(5);
  BoundaryTagger tagger(store, tiny_config(4), "t", rng);
  nn::Graph g;
  const Inputs in = feed(g, base_features(5, 3, 0.0), base_features(5, 2, 1.0));
  const StartForward sf = tagger.forward_start(g, in.base, in.aux);
  REQUIRE(sf.logits.size() == 5);
  REQUIRE(sf.states.size() == 5);
  for (int id : sf.logits) CHECK(g.dim(id) == 4);
  for (int id : sf.states) CHECK(g.dim(id) == 8);  // 2 * hidden

  // Softmax over each logit vector is a distribution.
  for (int id : sf.logits) {
    const auto p = testsupport::ref_softmax(g.value(id));
    double sum = 0;
    for (double x : p) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("layer widths follow the config") {
  nn::ParamStore store;
  nn::Rng rng(5);
  const TaggerConfig cfg = tiny_config(3);
  BoundaryTagger tagger(store, cfg, "t", rng);
  // Start BiLSTM consumes [base; aux].
  CHECK(store.find("t/start/fwd/W")->value.cols ==
        cfg.base_dim + cfg.aux_dim + cfg.hidden);
  // End BiLSTM consumes [start state; aux; position embedding].
  CHECK(store.find("t/end/fwd/W")->value.cols ==
        2 * cfg.hidden + cfg.aux_dim + cfg.pse_dim + cfg.hidden);
  // One position-embedding row per distance 0..C-1 plus the sentinel C.
  CHECK(store.find("t/pse")->value.rows == cfg.distance_constant + 1);
  CHECK(store.find("t/proj_start/W")->value.rows == cfg.tag_count);
  CHECK(store.find("t/proj_end/W")->value.rows == cfg.tag_count);
}

TEST_CASE("zeroed parameters give uniform boundary distributions") {
  nn::ParamStore store;
  nn::Rng rng(5);
  const int k = 5;
  BoundaryTagger tagger(store, tiny_config(k), "t", rng);
  zero_all(store);

  const int n = 4;
  nn::Graph g;
  const Inputs in = feed(g, base_features(n, 3, 0.0), base_features(n, 2, 1.0));
  BoundaryTagging gold;
  gold.start_tags = {1, 0, 2, 0};
  gold.end_tags = {0, 1, 0, 2};
  const auto nodes = tagger.training_loss(g, in.base, in.aux, gold);

  // All logits are zero, so every token's distribution is uniform over k
  // tags and the mean loss collapses to 2 log k.
  CHECK(g.value(nodes.loss)[0] ==
        doctest::Approx(2.0 * std::log(double(k))).epsilon(1e-12));

  const std::vector<std::vector<double>> uniform(
      n, std::vector<double>(k, 1.0 / k));
  CHECK(g.value(nodes.loss)[0] ==
        doctest::Approx(boundary_loss_from_distributions(
                            uniform, uniform, gold.start_tags, gold.end_tags))
            .epsilon(1e-12));
}

TEST_CASE("loss equals the mean of its per-token terms") {
  nn::ParamStore store;
  nn::Rng rng(8);
  BoundaryTagger tagger(store, tiny_config(3), "t", rng);
  const int n = 6;
  nn::Graph g;
  const Inputs in = feed(g, base_features(n, 3, 0.2), base_features(n, 2, 2.0));
  BoundaryTagging gold;
  gold.start_tags = {0, 1, 0, 0, 2, 0};
  gold.end_tags = {0, 0, 1, 0, 2, 0};
  const auto nodes = tagger.training_loss(g, in.base, in.aux, gold);
  REQUIRE(nodes.start_nll.size() == n);
  REQUIRE(nodes.end_nll.size() == n);
  double acc = 0;
  for (int id : nodes.start_nll) acc += g.value(id)[0];
  for (int id : nodes.end_nll) acc += g.value(id)[0];
  CHECK(g.value(nodes.loss)[0] == doctest::Approx(acc / n).epsilon(1e-12));
}

TEST_CASE("training always feeds gold distances to the end layer") {
  nn::ParamStore store;
  nn::Rng rng(5);
  BoundaryTagger tagger(store, tiny_config(3), "t", rng);

  std::vector<BoundaryTagger::DistanceSource> sources;
  std::vector<std::vector<int>> seen;
  tagger.distance_probe = [&](BoundaryTagger::DistanceSource src,
                              const std::vector<int>& d) {
    sources.push_back(src);
    seen.push_back(d);
  };

  const int n = 5;
  nn::Graph g;
  const Inputs in = feed(g, base_features(n, 3, 0.0), base_features(n, 2, 1.0));
  BoundaryTagging gold;
  gold.start_tags = {0, 2, 0, 0, 1};
  gold.end_tags = {0, 2, 0, 0, 1};
  tagger.training_loss(g, in.base, in.aux, gold);

  REQUIRE(sources.size() == 1);
  CHECK(sources[0] == BoundaryTagger::DistanceSource::kGold);
  CHECK(seen[0] == start_distances(gold.start_tags, 10).values);
  CHECK(seen[0] == std::vector<int>{10, 0, 1, 2, 0});
}

TEST_CASE("extraction feeds predicted distances to the end layer") {
  nn::ParamStore store;
  nn::Rng rng(5);
  BoundaryTagger tagger(store, tiny_config(3), "t", rng);
  zero_all(store);  // zero logits, argmax ties resolve to "O"

  std::vector<BoundaryTagger::DistanceSource> sources;
  std::vector<std::vector<int>> seen;
  tagger.distance_probe = [&](BoundaryTagger::DistanceSource src,
                              const std::vector<int>& d) {
    sources.push_back(src);
    seen.push_back(d);
  };

  const int n = 4;
  nn::Graph g;
  const Inputs in = feed(g, base_features(n, 3, 0.0), base_features(n, 2, 1.0));
  const DecodeResult r = tagger.extract(g, in.base, in.aux, TagSpace::kEntity);

  REQUIRE(sources.size() == 1);
  CHECK(sources[0] == BoundaryTagger::DistanceSource::kPredicted);
  // No predicted starts anywhere: every distance is the sentinel.
  CHECK(seen[0] == std::vector<int>(n, 10));
  CHECK(r.spans.empty());
  CHECK(r.dropped_starts == 0);
}

TEST_CASE("out-of-range distances are rejected") {
  nn::ParamStore store;
  nn::Rng rng(5);
  BoundaryTagger tagger(store, tiny_config(3), "t", rng);
  nn::Graph g;
  const Inputs in = feed(g, base_features(2, 3, 0.0), base_features(2, 2, 1.0));
  const StartForward sf = tagger.forward_start(g, in.base, in.aux);
  StartDistanceSequence bad;
  bad.values = {0, 11};  // C is 10
  bad.distance_constant = 10;
  CHECK_THROWS(tagger.forward_end(g, sf.states, in.aux, bad));
}

TEST_CASE("mismatched lengths are rejected") {
  nn::ParamStore store;
  nn::Rng rng(5);
  BoundaryTagger tagger(store, tiny_config(3), "t", rng);
  nn::Graph g;
  const Inputs in = feed(g, base_features(3, 3, 0.0), base_features(2, 2, 1.0));
  CHECK_THROWS(tagger.forward_start(g, in.base, in.aux));

  BoundaryTagging gold;
  gold.start_tags = {0, 0};
  gold.end_tags = {0, 0};
  const Inputs ok = feed(g, base_features(3, 3, 0.0), base_features(3, 2, 1.0));
  CHECK_THROWS(tagger.training_loss(g, ok.base, ok.aux, gold));
}

TEST_CASE("flat variant projects both tag sets from one pass") {
  nn::ParamStore store;
  nn::Rng rng(5);
  BoundaryTagger tagger(store, tiny_config(3, /*hierarchical=*/false), "t", rng);
  // No second tagging layer and no position table.
  CHECK(store.find("t/end/fwd/W") == nullptr);
  CHECK(store.find("t/pse") == nullptr);
  CHECK(store.find("t/proj_end/W") != nullptr);

  const int n = 4;
  nn::Graph g;
  const Inputs in = feed(g, base_features(n, 3, 0.0), base_features(n, 2, 1.0));
  BoundaryTagging gold;
  gold.start_tags = {1, 0, 0, 0};
  gold.end_tags = {0, 1, 0, 0};
  const auto nodes = tagger.training_loss(g, in.base, in.aux, gold);
  CHECK(std::isfinite(g.value(nodes.loss)[0]));

  nn::Graph g2;
  const Inputs in2 = feed(g2, base_features(n, 3, 0.0), base_features(n, 2, 1.0));
  const DecodeResult r = tagger.extract(g2, in2.base, in2.aux, TagSpace::kEntity);
  CHECK(r.dropped_starts >= 0);
}

TEST_CASE("pass counter counts start and end passes separately") {
  nn::ParamStore store;
  nn::Rng rng(5);
  BoundaryTagger tagger(store, tiny_config(3), "t", rng);
  CHECK(tagger.tagging_passes() == 0);
  nn::Graph g;
  const Inputs in = feed(g, base_features(3, 3, 0.0), base_features(3, 2, 1.0));
  tagger.extract(g, in.base, in.aux, TagSpace::kEntity);
  CHECK(tagger.tagging_passes() == 2);
  BoundaryTagging gold;
  gold.start_tags = {0, 1, 0};
  gold.end_tags = {0, 1, 0};
  tagger.training_loss(g, in.base, in.aux, gold);
  CHECK(tagger.tagging_passes() == 4);
  tagger.reset_passes();
  CHECK(tagger.tagging_passes() == 0);
}

TEST_CASE("analytic gradients match finite differences through the tagger") {
  nn::ParamStore store;
  nn::Rng rng(13);
  TaggerConfig cfg = tiny_config(3);
  cfg.hidden = 3;
  BoundaryTagger tagger(store, cfg, "t", rng);

  const auto base = base_features(4, 3, 0.1);
  const auto aux = base_features(4, 2, 0.9);
  BoundaryTagging gold;
  gold.start_tags = {0, 1, 0, 2};
  gold.end_tags = {0, 0, 1, 2};

  const auto loss_value = [&]() {
    nn::Graph g;
    const Inputs in = feed(g, base, aux);
    const auto nodes = tagger.training_loss(g, in.base, in.aux, gold);
    return g.value(nodes.loss)[0];
  };

  {
    nn::Graph g;
    const Inputs in = feed(g, base, aux);
    const auto nodes = tagger.training_loss(g, in.base, in.aux, gold);
    store.zero_grads();
    g.backward(nodes.loss);
  }
  const auto check = testsupport::finite_difference_check(store, loss_value);
  INFO("worst parameter: ", check.worst_param, "[", check.worst_index, "]");
  CHECK(check.max_rel_err < 1e-6);
}
