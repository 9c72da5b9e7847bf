#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "relspan/corpus.hpp"
#include "relspan/vocab.hpp"

namespace relspan {

// Gold annotations that cannot be written as boundary tags: two targets
// sharing a start token or an end token in the same tag sequence.
struct EncodingConflict : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class TagSpace { kEntity, kRelation };

// Paired start/end tag sequences over one sentence for one tagging task.
// Id 0 is "O" in both tag spaces.
struct BoundaryTagging {
  std::vector<int> start_tags;
  std::vector<int> end_tags;
  TagSpace space = TagSpace::kEntity;

  int size() const { return static_cast<int>(start_tags.size()); }
};

// Per-token distance to the nearest preceding start position; the
// sentinel C where no start has been seen yet.
struct StartDistanceSequence {
  std::vector<int> values;
  int distance_constant = 0;
};

struct TypedSpan {
  int start = 0;
  int end = 0;
  int label = 0;  // never 0 ("O")

  friend auto operator<=>(const TypedSpan&, const TypedSpan&) = default;
};

struct DecodeResult {
  std::vector<TypedSpan> spans;  // in start-index order
  int dropped_starts = 0;        // starts with no matching end tag
};

// Start/end entity-type tags over the distinct head-entity spans of `s`.
// Throws EncodingConflict when two head-entities share a start or an end
// token, or one span carries two entity types.
BoundaryTagging encode_he(const AnnotatedSentence& s,
                          const TagVocabulary& tags);

// Start/end relation tags over the tail entities of the triplets whose
// head is `head` (span identity). Throws EncodingConflict when two of
// those tails share a start or an end token — in particular for
// entity-pair-overlap triplets, which this scheme cannot represent.
BoundaryTagging encode_ter(const AnnotatedSentence& s, const EntitySpan& head,
                           const TagVocabulary& tags);

// Left-to-right scan: at each non-"O" start tag the reference position
// resets; a position with no preceding start gets the constant C. The
// value at a start position itself is 0.
StartDistanceSequence start_distances(const std::vector<int>& start_tags,
                                      int distance_constant);

// Multi-span decoding: each labeled start is paired with the nearest
// subsequent end position carrying the same label. Starts without a match
// are dropped and counted.
DecodeResult decode(const BoundaryTagging& tagging);

}  // namespace relspan
