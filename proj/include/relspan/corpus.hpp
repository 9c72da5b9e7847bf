#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace relspan {

struct IngestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tokenized sentence with per-token POS tags.
struct TokenSequence {
  std::vector<std::string> tokens;
  std::vector<std::string> pos_tags;

  int size() const { return static_cast<int>(tokens.size()); }
};

// Token-index span, inclusive on both ends.
struct EntitySpan {
  int start = 0;
  int end = 0;
  std::string entity_type;

  friend bool operator==(const EntitySpan& a, const EntitySpan& b) {
    return a.start == b.start && a.end == b.end &&
           a.entity_type == b.entity_type;
  }
  bool same_span(const EntitySpan& o) const {
    return start == o.start && end == o.end;
  }
};

struct Triplet {
  EntitySpan head;
  std::string relation;
  EntitySpan tail;
};

// Span-and-relation identity; entity types do not participate.
bool same_triplet(const Triplet& a, const Triplet& b);

struct AnnotatedSentence {
  TokenSequence sentence;
  std::vector<Triplet> triplets;
};

enum class OverlapCategory { kNormal, kSeo, kEpo };

const char* overlap_category_name(OverlapCategory c);

// Normal / SEO / EPO assignment over the gold triplets. EPO takes
// precedence over SEO, SEO over Normal. Entity identity is exact span
// equality. Throws on a sentence with no triplets.
OverlapCategory categorize_sentence(const AnnotatedSentence& s);

// Triplet-count bucket 1..5, where 5 stands for ">=5". Throws on zero
// triplets.
int triplet_count_bucket(const AnnotatedSentence& s);
std::string bucket_label(int bucket);

enum class DatasetFormat { kNative, kNyt, kWebnlg };

DatasetFormat parse_dataset_format(const std::string& name);

struct LoadStats {
  std::size_t duplicate_triplets_dropped = 0;
  std::size_t unresolved_mentions_dropped = 0;  // adapter formats only
};

// Reads a line-delimited dataset. Native records carry explicit token
// spans; the nyt/webnlg adapters locate entity mention strings in the
// whitespace-tokenized sentence text. Validation failures throw
// IngestError naming the offending line.
std::vector<AnnotatedSentence> load_dataset(const std::filesystem::path& path,
                                            DatasetFormat format,
                                            LoadStats* stats = nullptr);

// Writes the native line-delimited format. Spans with an empty entity
// type (e.g. predictions) are written without a "type" field.
void save_dataset(const std::filesystem::path& path,
                  const std::vector<AnnotatedSentence>& data);

// Validates one sentence's spans/lengths; throws IngestError with `where`
// in the message.
void validate_sentence(const AnnotatedSentence& s, const std::string& where);

// Distinct head-entity spans in triplet order of first appearance.
std::vector<EntitySpan> head_spans(const AnnotatedSentence& s);

}  // namespace relspan
