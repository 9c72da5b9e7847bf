#pragma once

#include <vector>

#include "relspan/corpus.hpp"

namespace relspan::testsupport {

// Ten-sentence memorization corpus. Sentence 0 carries the shared-head
// pair ((Trump, President_Of, United States), (Trump, Born_In, New York
// City)); the rest cover one to three heads, shared tails and a chained
// overlap. Checked in at data/overfit.jsonl for the CLI walkthrough.
std::vector<AnnotatedSentence> overfit_corpus();

// Index of a sentence whose gold head count is `m` (1, 2 or 3).
int overfit_sentence_with_heads(int m);

}  // namespace relspan::testsupport
