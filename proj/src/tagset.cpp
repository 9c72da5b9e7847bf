#include "relspan/tagset.hpp"

#include <map>
#include <sstream>

namespace relspan {

namespace {

struct Target {
  int start;
  int end;
  int label;
};

std::string describe(const Target& t) {
  std::ostringstream os;
  os << "[" << t.start << "," << t.end << "] tag " << t.label;
  return os.str();
}

// Places start/end tags for a set of targets, rejecting shared boundary
// tokens within either sequence.
BoundaryTagging place_tags(const std::vector<Target>& targets, int n,
                           TagSpace space, const char* what) {
  BoundaryTagging out;
  out.space = space;
  out.start_tags.assign(n, TagVocabulary::kOutsideId);
  out.end_tags.assign(n, TagVocabulary::kOutsideId);
  std::map<int, Target> by_start, by_end;
  for (const Target& t : targets) {
    if (auto [it, inserted] = by_start.emplace(t.start, t); !inserted)
      throw EncodingConflict(std::string(what) + " targets " +
                             describe(it->second) + " and " + describe(t) +
                             " share a start token");
    if (auto [it, inserted] = by_end.emplace(t.end, t); !inserted)
      throw EncodingConflict(std::string(what) + " targets " +
                             describe(it->second) + " and " + describe(t) +
                             " share an end token");
    out.start_tags[t.start] = t.label;
    out.end_tags[t.end] = t.label;
  }
  return out;
}

}  // namespace

BoundaryTagging encode_he(const AnnotatedSentence& s,
                          const TagVocabulary& tags) {
  // distinct head spans; a span with two different types is a conflict
  std::map<std::pair<int, int>, std::string> span_type;
  for (const Triplet& t : s.triplets) {
    auto [it, inserted] = span_type.emplace(
        std::pair{t.head.start, t.head.end}, t.head.entity_type);
    if (!inserted && it->second != t.head.entity_type)
      throw EncodingConflict(
          "head-entity [" + std::to_string(t.head.start) + "," +
          std::to_string(t.head.end) + "] carries entity types '" +
          it->second + "' and '" + t.head.entity_type + "'");
  }
  std::vector<Target> targets;
  for (const auto& [span, type] : span_type)
    targets.push_back({span.first, span.second, tags.entity_id(type)});
  return place_tags(targets, s.sentence.size(), TagSpace::kEntity,
                    "head-entity");
}

BoundaryTagging encode_ter(const AnnotatedSentence& s, const EntitySpan& head,
                           const TagVocabulary& tags) {
  // distinct (tail span, relation) pairs of this head
  std::vector<Target> targets;
  for (const Triplet& t : s.triplets) {
    if (!t.head.same_span(head)) continue;
    const Target cand{t.tail.start, t.tail.end,
                      tags.relation_id(t.relation)};
    bool dup = false;
    for (const Target& k : targets)
      if (k.start == cand.start && k.end == cand.end && k.label == cand.label)
        dup = true;
    if (!dup) targets.push_back(cand);
  }
  return place_tags(targets, s.sentence.size(), TagSpace::kRelation,
                    "tail-entity");
}

StartDistanceSequence start_distances(const std::vector<int>& start_tags,
                                      int distance_constant) {
  StartDistanceSequence out;
  out.distance_constant = distance_constant;
  out.values.assign(start_tags.size(), distance_constant);
  int nearest_start = -1;
  for (int i = 0; i < static_cast<int>(start_tags.size()); ++i) {
    if (start_tags[i] != TagVocabulary::kOutsideId) nearest_start = i;
    if (nearest_start >= 0) out.values[i] = i - nearest_start;
  }
  return out;
}

DecodeResult decode(const BoundaryTagging& tagging) {
  DecodeResult out;
  const int n = tagging.size();
  for (int i = 0; i < n; ++i) {
    const int label = tagging.start_tags[i];
    if (label == TagVocabulary::kOutsideId) continue;
    bool matched = false;
    for (int j = i; j < n; ++j) {
      if (tagging.end_tags[j] == label) {
        out.spans.push_back({i, j, label});
        matched = true;
        break;
      }
    }
    if (!matched) ++out.dropped_starts;
  }
  return out;
}

}  // namespace relspan
