#include "relspan/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace relspan {

using nlohmann::json;

bool same_triplet(const Triplet& a, const Triplet& b) {
  return a.head.same_span(b.head) && a.relation == b.relation &&
         a.tail.same_span(b.tail);
}

const char* overlap_category_name(OverlapCategory c) {
  switch (c) {
    case OverlapCategory::kNormal:
      return "Normal";
    case OverlapCategory::kSeo:
      return "SEO";
    case OverlapCategory::kEpo:
      return "EPO";
  }
  return "?";
}

namespace {

using SpanKey = std::pair<int, int>;

SpanKey key(const EntitySpan& e) { return {e.start, e.end}; }

// Unordered entity pair of one triplet.
std::pair<SpanKey, SpanKey> pair_key(const Triplet& t) {
  SpanKey h = key(t.head), l = key(t.tail);
  return h <= l ? std::pair{h, l} : std::pair{l, h};
}

}  // namespace

OverlapCategory categorize_sentence(const AnnotatedSentence& s) {
  if (s.triplets.empty())
    throw std::invalid_argument(
        "overlap category is undefined for a sentence with no triplets");
  const auto& ts = s.triplets;
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t j = i + 1; j < ts.size(); ++j)
      if (pair_key(ts[i]) == pair_key(ts[j]) &&
          ts[i].relation != ts[j].relation)
        return OverlapCategory::kEpo;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const SpanKey a[2] = {key(ts[i].head), key(ts[i].tail)};
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      const SpanKey b[2] = {key(ts[j].head), key(ts[j].tail)};
      for (const auto& x : a)
        for (const auto& y : b)
          if (x == y) return OverlapCategory::kSeo;
    }
  }
  return OverlapCategory::kNormal;
}

int triplet_count_bucket(const AnnotatedSentence& s) {
  if (s.triplets.empty())
    throw std::invalid_argument(
        "triplet-count bucket is undefined for a sentence with no triplets");
  return std::min<int>(static_cast<int>(s.triplets.size()), 5);
}

std::string bucket_label(int bucket) {
  return bucket >= 5 ? ">=5" : std::to_string(bucket);
}

DatasetFormat parse_dataset_format(const std::string& name) {
  if (name == "native") return DatasetFormat::kNative;
  if (name == "nyt") return DatasetFormat::kNyt;
  if (name == "webnlg") return DatasetFormat::kWebnlg;
  throw IngestError("unknown dataset format: " + name);
}

void validate_sentence(const AnnotatedSentence& s, const std::string& where) {
  const int n = s.sentence.size();
  if (n == 0) throw IngestError(where + ": sentence has no tokens");
  if (static_cast<int>(s.sentence.pos_tags.size()) != n)
    throw IngestError(where + ": pos tag count does not match token count");
  for (const auto& t : s.sentence.tokens)
    if (t.empty()) throw IngestError(where + ": empty token");
  for (const Triplet& t : s.triplets) {
    for (const EntitySpan* e : {&t.head, &t.tail}) {
      if (e->start < 0 || e->start > e->end || e->end >= n) {
        std::ostringstream os;
        os << where << ": span [" << e->start << "," << e->end
           << "] out of range for sentence of length " << n;
        throw IngestError(os.str());
      }
    }
    if (t.relation.empty()) throw IngestError(where + ": empty relation label");
  }
}

std::vector<EntitySpan> head_spans(const AnnotatedSentence& s) {
  std::vector<EntitySpan> heads;
  for (const Triplet& t : s.triplets) {
    bool seen = false;
    for (const EntitySpan& h : heads)
      if (h.same_span(t.head)) {
        seen = true;
        break;
      }
    if (!seen) heads.push_back(t.head);
  }
  return heads;
}

namespace {

std::size_t drop_duplicates(AnnotatedSentence& s) {
  std::vector<Triplet> kept;
  std::size_t dropped = 0;
  for (const Triplet& t : s.triplets) {
    bool dup = false;
    for (const Triplet& k : kept)
      if (same_triplet(k, t)) {
        dup = true;
        break;
      }
    if (dup)
      ++dropped;
    else
      kept.push_back(t);
  }
  s.triplets = std::move(kept);
  return dropped;
}

EntitySpan span_from_json(const json& j, const std::string& where) {
  if (!j.contains("start") || !j.contains("end"))
    throw IngestError(where + ": span is missing start/end");
  EntitySpan e;
  e.start = j.at("start").get<int>();
  e.end = j.at("end").get<int>();
  e.entity_type = j.value("type", "");
  return e;
}

AnnotatedSentence native_record(const json& j, const std::string& where) {
  AnnotatedSentence s;
  if (!j.contains("tokens") || !j.at("tokens").is_array())
    throw IngestError(where + ": missing tokens array");
  for (const auto& t : j.at("tokens"))
    s.sentence.tokens.push_back(t.get<std::string>());
  if (j.contains("pos")) {
    for (const auto& p : j.at("pos"))
      s.sentence.pos_tags.push_back(p.get<std::string>());
  } else {
    s.sentence.pos_tags.assign(s.sentence.tokens.size(), "UNK");
  }
  for (const auto& tj : j.value("triplets", json::array())) {
    Triplet t;
    t.head = span_from_json(tj.at("head"), where);
    t.relation = tj.at("relation").get<std::string>();
    t.tail = span_from_json(tj.at("tail"), where);
    s.triplets.push_back(std::move(t));
  }
  return s;
}

// Finds `text`, itself whitespace-tokenized, as a token subsequence.
// Returns false when the mention cannot be located.
bool locate_mention(const std::vector<std::string>& tokens,
                    const std::string& text, int* start, int* end) {
  std::vector<std::string> words;
  std::istringstream is(text);
  std::string w;
  while (is >> w) words.push_back(w);
  if (words.empty()) return false;
  const int n = static_cast<int>(tokens.size());
  const int m = static_cast<int>(words.size());
  for (int i = 0; i + m <= n; ++i) {
    bool ok = true;
    for (int k = 0; k < m; ++k)
      if (tokens[i + k] != words[k]) {
        ok = false;
        break;
      }
    if (ok) {
      *start = i;
      *end = i + m - 1;
      return true;
    }
  }
  return false;
}

// Published preprocessed NYT/WebNLG records: sentence text plus entity and
// relation mentions given as strings.
AnnotatedSentence mention_record(const json& j, const std::string& where,
                                 LoadStats* stats) {
  AnnotatedSentence s;
  if (!j.contains("sentText"))
    throw IngestError(where + ": missing sentText");
  std::istringstream is(j.at("sentText").get<std::string>());
  std::string tok;
  while (is >> tok) s.sentence.tokens.push_back(tok);
  s.sentence.pos_tags.assign(s.sentence.tokens.size(), "UNK");

  std::unordered_map<std::string, std::string> mention_type;
  for (const auto& em : j.value("entityMentions", json::array()))
    mention_type[em.value("text", "")] = em.value("label", "ENT");

  auto type_of = [&](const std::string& text) {
    auto it = mention_type.find(text);
    return it == mention_type.end() ? std::string("ENT") : it->second;
  };

  for (const auto& rm : j.value("relationMentions", json::array())) {
    const std::string rel = rm.value("label", "");
    if (rel.empty() || rel == "None") continue;
    Triplet t;
    t.relation = rel;
    const std::string em1 = rm.value("em1Text", "");
    const std::string em2 = rm.value("em2Text", "");
    if (!locate_mention(s.sentence.tokens, em1, &t.head.start, &t.head.end) ||
        !locate_mention(s.sentence.tokens, em2, &t.tail.start, &t.tail.end)) {
      if (stats) ++stats->unresolved_mentions_dropped;
      continue;
    }
    t.head.entity_type = type_of(em1);
    t.tail.entity_type = type_of(em2);
    s.triplets.push_back(std::move(t));
  }
  return s;
}

}  // namespace

std::vector<AnnotatedSentence> load_dataset(const std::filesystem::path& path,
                                            DatasetFormat format,
                                            LoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open dataset file: " + path.string());
  std::vector<AnnotatedSentence> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw IngestError(where + ": malformed record: " + e.what());
    }
    AnnotatedSentence s;
    try {
      s = (format == DatasetFormat::kNative) ? native_record(j, where)
                                             : mention_record(j, where, stats);
    } catch (const json::exception& e) {
      throw IngestError(where + ": malformed record: " + e.what());
    }
    if (format != DatasetFormat::kNative && s.sentence.tokens.empty())
      continue;  // adapters skip empty sentences
    validate_sentence(s, where);
    const std::size_t dropped = drop_duplicates(s);
    if (stats) stats->duplicate_triplets_dropped += dropped;
    out.push_back(std::move(s));
  }
  return out;
}

void save_dataset(const std::filesystem::path& path,
                  const std::vector<AnnotatedSentence>& data) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write dataset file: " + path.string());
  for (const AnnotatedSentence& s : data) {
    json j;
    j["tokens"] = s.sentence.tokens;
    j["pos"] = s.sentence.pos_tags;
    json trips = json::array();
    for (const Triplet& t : s.triplets) {
      json tj;
      auto span_json = [](const EntitySpan& e) {
        json sj;
        sj["start"] = e.start;
        sj["end"] = e.end;
        if (!e.entity_type.empty()) sj["type"] = e.entity_type;
        return sj;
      };
      tj["head"] = span_json(t.head);
      tj["relation"] = t.relation;
      tj["tail"] = span_json(t.tail);
      trips.push_back(std::move(tj));
    }
    j["triplets"] = std::move(trips);
    out << j.dump() << "\n";
  }
}

}  // namespace relspan
