#include "relspan/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

namespace relspan {

int StringVocab::add(const std::string& s) {
  auto it = index_.find(s);
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(items_.size());
  items_.push_back(s);
  index_.emplace(s, id);
  return id;
}

int StringVocab::id(const std::string& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? -1 : it->second;
}

int StringVocab::id_or(const std::string& s, int fallback) const {
  const int i = id(s);
  return i < 0 ? fallback : i;
}

const std::string& StringVocab::label(int id) const {
  return items_.at(static_cast<std::size_t>(id));
}

int TagVocabulary::entity_id(const std::string& s) const {
  const int id = entity_types.id(s);
  if (id < 0) throw std::out_of_range("unknown entity type: " + s);
  return id;
}

int TagVocabulary::relation_id(const std::string& s) const {
  const int id = relation_types.id(s);
  if (id < 0) throw std::out_of_range("unknown relation type: " + s);
  return id;
}

int Vocabularies::pos_id(const std::string& p) const {
  return pos.id_or(p, pos.id(kUnkPos));
}

Vocabularies build_vocabularies(const std::vector<AnnotatedSentence>& data,
                                int min_token_freq) {
  if (data.empty())
    throw std::invalid_argument("cannot build vocabularies from empty data");

  Vocabularies v;
  v.tags.entity_types.add(TagVocabulary::kOutsideLabel);
  v.tags.relation_types.add(TagVocabulary::kOutsideLabel);
  v.tokens.add(Vocabularies::kUnkToken);
  v.chars.add(Vocabularies::kPadChar);
  v.chars.add(Vocabularies::kUnkChar);
  v.pos.add(Vocabularies::kUnkPos);

  std::set<std::string> entity_set, relation_set;
  std::map<std::string, int> token_freq;
  for (const AnnotatedSentence& s : data) {
    for (const std::string& t : s.sentence.tokens) ++token_freq[t];
    for (const std::string& p : s.sentence.pos_tags) v.pos.add(p);
    for (const Triplet& t : s.triplets) {
      if (!t.head.entity_type.empty()) entity_set.insert(t.head.entity_type);
      if (!t.tail.entity_type.empty()) entity_set.insert(t.tail.entity_type);
      relation_set.insert(t.relation);
    }
  }
  for (const std::string& e : entity_set) v.tags.entity_types.add(e);
  for (const std::string& r : relation_set) v.tags.relation_types.add(r);

  for (const AnnotatedSentence& s : data)
    for (const std::string& t : s.sentence.tokens)
      if (token_freq[t] >= min_token_freq) v.tokens.add(t);

  for (const AnnotatedSentence& s : data)
    for (const std::string& t : s.sentence.tokens)
      for (unsigned char c : t) v.chars.add(std::string(1, c));

  return v;
}

namespace {

void save_lines(const std::filesystem::path& file,
                const std::vector<std::string>& lines) {
  std::ofstream out(file);
  if (!out) throw IngestError("cannot write vocabulary file: " + file.string());
  for (const std::string& l : lines) out << l << "\n";
}

std::vector<std::string> load_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IngestError("cannot read vocabulary file: " + file.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

StringVocab vocab_from_lines(const std::vector<std::string>& lines) {
  StringVocab v;
  for (const std::string& l : lines) v.add(l);
  return v;
}

}  // namespace

void Vocabularies::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  save_lines(dir / "entity_types.txt", tags.entity_types.labels());
  save_lines(dir / "relation_types.txt", tags.relation_types.labels());
  save_lines(dir / "tokens.txt", tokens.labels());
  save_lines(dir / "chars.txt", chars.labels());
  save_lines(dir / "pos.txt", pos.labels());
}

Vocabularies Vocabularies::load(const std::filesystem::path& dir) {
  Vocabularies v;
  v.tags.entity_types = vocab_from_lines(load_lines(dir / "entity_types.txt"));
  v.tags.relation_types =
      vocab_from_lines(load_lines(dir / "relation_types.txt"));
  v.tokens = vocab_from_lines(load_lines(dir / "tokens.txt"));
  v.chars = vocab_from_lines(load_lines(dir / "chars.txt"));
  v.pos = vocab_from_lines(load_lines(dir / "pos.txt"));
  if (v.tags.entity_types.id(TagVocabulary::kOutsideLabel) != 0 ||
      v.tags.relation_types.id(TagVocabulary::kOutsideLabel) != 0)
    throw IngestError("vocabulary files in " + dir.string() +
                      " do not place O at id 0");
  return v;
}

}  // namespace relspan
