#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "relspan/corpus.hpp"

namespace relspan {

// Bidirectional label <-> id map; ids are dense and start at 0.
class StringVocab {
 public:
  int add(const std::string& s);          // registers if absent
  int id(const std::string& s) const;     // -1 if absent
  int id_or(const std::string& s, int fallback) const;
  const std::string& label(int id) const;
  int size() const { return static_cast<int>(items_.size()); }
  const std::vector<std::string>& labels() const { return items_; }

 private:
  std::vector<std::string> items_;
  std::unordered_map<std::string, int> index_;
};

// Entity-type and relation-type tag spaces. "O" occupies id 0 in both.
struct TagVocabulary {
  static constexpr int kOutsideId = 0;
  static constexpr const char* kOutsideLabel = "O";

  StringVocab entity_types;
  StringVocab relation_types;

  int entity_id(const std::string& s) const;    // throws on unknown
  int relation_id(const std::string& s) const;  // throws on unknown
};

struct Vocabularies {
  static constexpr const char* kUnkToken = "<unk>";
  static constexpr const char* kPadChar = "<pad>";
  static constexpr const char* kUnkChar = "<unk>";
  static constexpr const char* kUnkPos = "UNK";

  TagVocabulary tags;
  StringVocab tokens;  // id 0 = <unk>
  StringVocab chars;   // id 0 = <pad>, id 1 = <unk>
  StringVocab pos;     // always contains UNK

  int token_id(const std::string& tok) const { return tokens.id_or(tok, 0); }
  int char_id(const std::string& ch) const { return chars.id_or(ch, 1); }
  int pos_id(const std::string& p) const;

  void save(const std::filesystem::path& dir) const;
  static Vocabularies load(const std::filesystem::path& dir);
};

// Registers every entity type, relation type, token, character and POS tag
// present in `data`. Tokens below `min_token_freq` occurrences map to the
// unknown entry. Label sets are stored sorted so the result does not
// depend on sentence order. Throws on empty data.
Vocabularies build_vocabularies(const std::vector<AnnotatedSentence>& data,
                                int min_token_freq = 1);

}  // namespace relspan
