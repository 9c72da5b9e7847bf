#include "support/synthetic.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace relspan::testsupport {
namespace {

const std::vector<std::string> kPeople = {
    "alice",      "bob",   "carol",        "dave",
    "erin",       "frank", "grace hopper", "henry ford",
};
const std::vector<std::string> kOrgs = {
    "acme",          "globex", "initech", "umbrella corp",
    "stark industries", "hooli",
};
const std::vector<std::string> kPlaces = {
    "springfield", "berlin", "oslo", "new york", "rio de janeiro", "tokyo",
};

struct Mention {
  std::string surface;
  std::string type;
  int start = -1;
  int end = -1;
};

Mention draw(nn::Rng& rng, const std::vector<std::string>& pool,
             const char* type, const std::vector<Mention>& taken) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (;;) {
    Mention m;
    m.surface = pool[pick(rng)];
    m.type = type;
    const bool dup = std::any_of(taken.begin(), taken.end(), [&](const Mention& t) {
      return t.surface == m.surface;
    });
    if (!dup) return m;
  }
}

// Appends the mention's words to the token stream, recording its span.
void emit(Mention& m, std::vector<std::string>& tokens) {
  std::istringstream words(m.surface);
  std::string w;
  m.start = static_cast<int>(tokens.size());
  while (words >> w) tokens.push_back(w);
  m.end = static_cast<int>(tokens.size()) - 1;
}

void emit_words(const char* text, std::vector<std::string>& tokens) {
  std::istringstream words(text);
  std::string w;
  while (words >> w) tokens.push_back(w);
}

EntitySpan span_of(const Mention& m) { return {m.start, m.end, m.type}; }

Triplet link(const Mention& head, const char* relation, const Mention& tail) {
  return {span_of(head), relation, span_of(tail)};
}

}  // namespace

const char* synthetic_pos(const std::string& token) {
  static const std::map<std::string, const char*> kTags = {
      {"works", "VBZ"}, {"work", "VBP"},  {"leads", "VBZ"}, {"is", "VBZ"},
      {"was", "VBD"},   {"born", "VBN"},  {"based", "VBN"}, {"for", "IN"},
      {"in", "IN"},     {"and", "CC"},    {"while", "IN"},  {",", ","},
      {".", "."},
  };
  const auto it = kTags.find(token);
  return it != kTags.end() ? it->second : "NNP";
}

AnnotatedSentence make_synthetic_sentence(nn::Rng& rng) {
  AnnotatedSentence s;
  std::vector<std::string>& toks = s.sentence.tokens;
  std::vector<Mention> used;

  // Templates 0-3 are single-triplet Normal sentences, 4 is a two-triplet
  // Normal, 5-7 are SEO (shared head, shared tail, chain), 8 is a
  // three-triplet SEO. Weighted so SEO lands near 40%.
  std::uniform_int_distribution<int> pick_template(0, 9);
  const int t = pick_template(rng);
  switch (t) {
    case 0: {
      Mention p = draw(rng, kPeople, "PER", used);
      Mention o = draw(rng, kOrgs, "ORG", used);
      emit(p, toks);
      emit_words("works for", toks);
      emit(o, toks);
      emit_words(".", toks);
      s.triplets = {link(p, "works_for", o)};
      break;
    }
    case 1: {
      Mention o = draw(rng, kOrgs, "ORG", used);
      Mention l = draw(rng, kPlaces, "LOC", used);
      emit(o, toks);
      emit_words("is based in", toks);
      emit(l, toks);
      emit_words(".", toks);
      s.triplets = {link(o, "based_in", l)};
      break;
    }
    case 2: {
      Mention p = draw(rng, kPeople, "PER", used);
      Mention l = draw(rng, kPlaces, "LOC", used);
      emit(p, toks);
      emit_words("was born in", toks);
      emit(l, toks);
      emit_words(".", toks);
      s.triplets = {link(p, "born_in", l)};
      break;
    }
    case 3: {
      Mention p = draw(rng, kPeople, "PER", used);
      Mention o = draw(rng, kOrgs, "ORG", used);
      emit(p, toks);
      emit_words("leads", toks);
      emit(o, toks);
      emit_words(".", toks);
      s.triplets = {link(p, "leads", o)};
      break;
    }
    case 4: {
      Mention p1 = draw(rng, kPeople, "PER", used);
      used.push_back(p1);
      Mention o1 = draw(rng, kOrgs, "ORG", used);
      used.push_back(o1);
      Mention p2 = draw(rng, kPeople, "PER", used);
      used.push_back(p2);
      Mention o2 = draw(rng, kOrgs, "ORG", used);
      emit(p1, toks);
      emit_words("works for", toks);
      emit(o1, toks);
      emit_words("while", toks);
      emit(p2, toks);
      emit_words("leads", toks);
      emit(o2, toks);
      emit_words(".", toks);
      s.triplets = {link(p1, "works_for", o1), link(p2, "leads", o2)};
      break;
    }
    case 5:
    case 6: {
      // Shared head: one person, two organizations.
      Mention p = draw(rng, kPeople, "PER", used);
      used.push_back(p);
      Mention o1 = draw(rng, kOrgs, "ORG", used);
      used.push_back(o1);
      Mention o2 = draw(rng, kOrgs, "ORG", used);
      emit(p, toks);
      emit_words("works for", toks);
      emit(o1, toks);
      emit_words("and leads", toks);
      emit(o2, toks);
      emit_words(".", toks);
      s.triplets = {link(p, "works_for", o1), link(p, "leads", o2)};
      break;
    }
    case 7: {
      // Shared tail: two people, one organization.
      Mention p1 = draw(rng, kPeople, "PER", used);
      used.push_back(p1);
      Mention p2 = draw(rng, kPeople, "PER", used);
      used.push_back(p2);
      Mention o = draw(rng, kOrgs, "ORG", used);
      emit(p1, toks);
      emit_words("and", toks);
      emit(p2, toks);
      emit_words("work for", toks);
      emit(o, toks);
      emit_words(".", toks);
      s.triplets = {link(p1, "works_for", o), link(p2, "works_for", o)};
      break;
    }
    case 8: {
      // Chain: the organization is a tail and a head.
      Mention p = draw(rng, kPeople, "PER", used);
      used.push_back(p);
      Mention o = draw(rng, kOrgs, "ORG", used);
      used.push_back(o);
      Mention l = draw(rng, kPlaces, "LOC", used);
      emit(p, toks);
      emit_words("leads", toks);
      emit(o, toks);
      emit_words("based in", toks);
      emit(l, toks);
      emit_words(".", toks);
      s.triplets = {link(p, "leads", o), link(o, "based_in", l)};
      break;
    }
    case 9: {
      // Three triplets around one organization.
      Mention p1 = draw(rng, kPeople, "PER", used);
      used.push_back(p1);
      Mention p2 = draw(rng, kPeople, "PER", used);
      used.push_back(p2);
      Mention o = draw(rng, kOrgs, "ORG", used);
      used.push_back(o);
      Mention l = draw(rng, kPlaces, "LOC", used);
      emit(p1, toks);
      emit_words("and", toks);
      emit(p2, toks);
      emit_words("work for", toks);
      emit(o, toks);
      emit_words("based in", toks);
      emit(l, toks);
      emit_words(".", toks);
      s.triplets = {link(p1, "works_for", o), link(p2, "works_for", o),
                    link(o, "based_in", l)};
      break;
    }
    default:
      throw std::logic_error("unreachable template id");
  }

  s.sentence.pos_tags.reserve(toks.size());
  for (const std::string& w : toks) s.sentence.pos_tags.push_back(synthetic_pos(w));
  return s;
}

AnnotatedSentence make_disjoint_sentence(nn::Rng& rng, int max_len,
                                         int entity_types, int relations) {
  const int n = std::uniform_int_distribution<int>(2, max_len)(rng);
  AnnotatedSentence s;
  for (int i = 0; i < n; ++i) {
    s.sentence.tokens.push_back("t" + std::to_string(i));
    s.sentence.pos_tags.push_back("X");
  }

  // Rejection-sample spans onto unused tokens; disjointness guarantees
  // conflict-free encodings and exact first-match decoding even when two
  // spans share a label.
  std::vector<EntitySpan> spans;
  std::vector<bool> used(n, false);
  std::uniform_int_distribution<int> start_dist(0, n - 1);
  std::uniform_int_distribution<int> width_dist(0, 2);
  std::uniform_int_distribution<int> etype(1, entity_types);
  const int wanted = std::uniform_int_distribution<int>(2, 5)(rng);
  for (int attempt = 0;
       attempt < 50 && static_cast<int>(spans.size()) < wanted; ++attempt) {
    const int a = start_dist(rng);
    const int b = std::min(n - 1, a + width_dist(rng));
    bool free = true;
    for (int i = a; i <= b; ++i) free = free && !used[i];
    if (!free) continue;
    for (int i = a; i <= b; ++i) used[i] = true;
    spans.push_back({a, b, "E" + std::to_string(etype(rng))});
  }
  if (spans.size() < 2) return s;

  std::uniform_int_distribution<int> rtype(1, relations);
  for (std::size_t i = 1; i < spans.size(); ++i)
    s.triplets.push_back({spans[0], "R" + std::to_string(rtype(rng)), spans[i]});
  if (spans.size() >= 3)
    s.triplets.push_back({spans[1], "R" + std::to_string(rtype(rng)), spans[0]});
  return s;
}

SyntheticCorpus make_synthetic_corpus(std::uint64_t seed, int train_size,
                                      int dev_size) {
  nn::Rng rng(seed);
  SyntheticCorpus out;
  out.train.reserve(train_size);
  out.dev.reserve(dev_size);
  for (int i = 0; i < train_size; ++i) out.train.push_back(make_synthetic_sentence(rng));
  for (int i = 0; i < dev_size; ++i) out.dev.push_back(make_synthetic_sentence(rng));
  return out;
}

}  // namespace relspan::testsupport
