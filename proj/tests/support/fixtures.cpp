#include "support/fixtures.hpp"

#include <sstream>
#include <stdexcept>

#include "support/synthetic.hpp"

namespace relspan::testsupport {
namespace {

AnnotatedSentence sentence(const char* text, std::vector<Triplet> triplets) {
  AnnotatedSentence s;
  std::istringstream words(text);
  std::string w;
  while (words >> w) {
    s.sentence.tokens.push_back(w);
    s.sentence.pos_tags.push_back(synthetic_pos(w));
  }
  s.triplets = std::move(triplets);
  return s;
}

Triplet t(int hs, int he, const char* htype, const char* rel, int ts, int te,
          const char* ttype) {
  return {{hs, he, htype}, rel, {ts, te, ttype}};
}

}  // namespace

std::vector<AnnotatedSentence> overfit_corpus() {
  std::vector<AnnotatedSentence> out;
  out.push_back(sentence(
      "United States President Trump was born in Queens , New York City .",
      {t(3, 3, "PER", "President_Of", 0, 1, "LOC"),
       t(3, 3, "PER", "Born_In", 9, 11, "LOC")}));
  out.push_back(sentence("alice works for acme .",
                         {t(0, 0, "PER", "Works_For", 3, 3, "ORG")}));
  out.push_back(sentence("acme is based in berlin .",
                         {t(0, 0, "ORG", "Based_In", 4, 4, "LOC")}));
  out.push_back(sentence("bob was born in oslo .",
                         {t(0, 0, "PER", "Born_In", 4, 4, "LOC")}));
  out.push_back(sentence("carol leads globex and initech .",
                         {t(0, 0, "PER", "Leads", 2, 2, "ORG"),
                          t(0, 0, "PER", "Leads", 4, 4, "ORG")}));
  out.push_back(sentence(
      "dave and erin work for stark industries based in tokyo .",
      {t(0, 0, "PER", "Works_For", 5, 6, "ORG"),
       t(2, 2, "PER", "Works_For", 5, 6, "ORG"),
       t(5, 6, "ORG", "Based_In", 9, 9, "LOC")}));
  out.push_back(sentence("henry ford leads acme .",
                         {t(0, 1, "PER", "Leads", 3, 3, "ORG")}));
  out.push_back(sentence("globex is based in tokyo .",
                         {t(0, 0, "ORG", "Based_In", 4, 4, "LOC")}));
  out.push_back(sentence("erin was born in springfield .",
                         {t(0, 0, "PER", "Born_In", 4, 4, "LOC")}));
  out.push_back(sentence("frank leads initech based in berlin .",
                         {t(0, 0, "PER", "Leads", 2, 2, "ORG"),
                          t(2, 2, "ORG", "Based_In", 5, 5, "LOC")}));
  return out;
}

int overfit_sentence_with_heads(int m) {
  switch (m) {
    case 1: return 1;  // alice works for acme
    case 2: return 9;  // frank leads initech based in berlin
    case 3: return 5;  // dave and erin ... based in tokyo
    default: throw std::invalid_argument("no fixture sentence with that head count");
  }
}

}  // namespace relspan::testsupport
