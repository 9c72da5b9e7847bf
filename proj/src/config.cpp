#include "relspan/config.hpp"

#include <fstream>
#include <functional>
#include <stdexcept>

namespace relspan {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const int r = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + v + "'");
  }
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double r = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

HeadAnchor parse_anchor(const std::string& v) {
  if (v == "start") return HeadAnchor::kStart;
  if (v == "end") return HeadAnchor::kEnd;
  throw std::invalid_argument("head_distance_anchor must be 'start' or 'end', got '" + v + "'");
}

}  // namespace

void TrainConfig::validate() const {
  if (learning_rate <= 0) throw std::invalid_argument("learning_rate must be positive");
  if (batch_size <= 0) throw std::invalid_argument("batch_size must be positive");
  if (dropout < 0 || dropout >= 1) throw std::invalid_argument("dropout must be in [0, 1)");
  if (grad_clip_norm <= 0) throw std::invalid_argument("grad_clip_norm must be positive");
  if (max_epochs <= 0) throw std::invalid_argument("max_epochs must be positive");
  if (patience < 0) throw std::invalid_argument("patience must be >= 0");
}

void apply_train_config(const TrainConfig& t, ModelConfig& m) {
  m.encoder.dropout = t.dropout;
  m.encoder.use_char = !t.no_char;
  m.no_pht = t.no_pht;
  m.no_hierarchy = t.no_hierarchy;
  m.binary_head_types = t.binary_head_types;
  m.pipeline_mode = t.pipeline_mode;
}

std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": empty key");
    }
    if (!out.emplace(key, val).second) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": duplicate key '" + key + "'");
    }
  }
  return out;
}

TrainSettings settings_from_entries(
    const std::map<std::string, std::string>& entries) {
  TrainSettings s;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"learning_rate", [&](const std::string& k, const std::string& v) { s.train.learning_rate = parse_double(k, v); }},
      {"batch_size", [&](const std::string& k, const std::string& v) { s.train.batch_size = parse_int(k, v); }},
      {"dropout", [&](const std::string& k, const std::string& v) { s.train.dropout = parse_double(k, v); }},
      {"grad_clip_norm", [&](const std::string& k, const std::string& v) { s.train.grad_clip_norm = parse_double(k, v); }},
      {"max_epochs", [&](const std::string& k, const std::string& v) { s.train.max_epochs = parse_int(k, v); }},
      {"patience", [&](const std::string& k, const std::string& v) { s.train.patience = parse_int(k, v); }},
      {"seed", [&](const std::string& k, const std::string& v) { s.train.seed = static_cast<std::uint64_t>(parse_int(k, v)); }},
      {"repeat_heads", [&](const std::string& k, const std::string& v) { s.train.repeat_heads = parse_bool(k, v); }},
      {"negative_head_sampling", [&](const std::string& k, const std::string& v) { s.train.negative_head_sampling = parse_bool(k, v); }},
      {"no_char", [&](const std::string& k, const std::string& v) { s.train.no_char = parse_bool(k, v); }},
      {"no_pht", [&](const std::string& k, const std::string& v) { s.train.no_pht = parse_bool(k, v); }},
      {"no_hierarchy", [&](const std::string& k, const std::string& v) { s.train.no_hierarchy = parse_bool(k, v); }},
      {"binary_head_types", [&](const std::string& k, const std::string& v) { s.train.binary_head_types = parse_bool(k, v); }},
      {"pipeline_mode", [&](const std::string& k, const std::string& v) { s.train.pipeline_mode = parse_bool(k, v); }},
      {"word_dim", [&](const std::string& k, const std::string& v) { s.model.encoder.word_dim = parse_int(k, v); }},
      {"char_emb_dim", [&](const std::string& k, const std::string& v) { s.model.encoder.char_emb_dim = parse_int(k, v); }},
      {"char_window", [&](const std::string& k, const std::string& v) { s.model.encoder.char_cnn_window = parse_int(k, v); }},
      {"char_filters", [&](const std::string& k, const std::string& v) { s.model.encoder.char_cnn_filters = parse_int(k, v); }},
      {"pos_dim", [&](const std::string& k, const std::string& v) { s.model.encoder.pos_dim = parse_int(k, v); }},
      {"hidden_dim", [&](const std::string& k, const std::string& v) { s.model.encoder.hidden_dim = parse_int(k, v); }},
      {"char_max_len", [&](const std::string& k, const std::string& v) { s.model.encoder.char_max_len = parse_int(k, v); }},
      {"freeze_word_vectors", [&](const std::string& k, const std::string& v) { s.model.encoder.freeze_word_vectors = parse_bool(k, v); }},
      {"tagger_hidden", [&](const std::string& k, const std::string& v) { s.model.tagger_hidden = parse_int(k, v); }},
      {"pse_dim", [&](const std::string& k, const std::string& v) { s.model.pse_dim = parse_int(k, v); }},
      {"pht_dim", [&](const std::string& k, const std::string& v) { s.model.pht_dim = parse_int(k, v); }},
      {"max_sentence_len", [&](const std::string& k, const std::string& v) { s.model.max_sentence_len = parse_int(k, v); }},
      {"head_distance_anchor", [&](const std::string&, const std::string& v) { s.model.head_distance_anchor = parse_anchor(v); }},
      {"pretrained_vectors", [&](const std::string&, const std::string& v) { s.pretrained_vectors = v; }},
      {"seeds", [&](const std::string& k, const std::string& v) { s.seeds = parse_int(k, v); }},
      {"min_token_freq", [&](const std::string& k, const std::string& v) { s.min_token_freq = parse_int(k, v); }},
  };
  for (const auto& [key, val] : entries) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
    it->second(key, val);
  }
  s.train.validate();
  if (s.seeds < 1) throw std::invalid_argument("seeds must be >= 1");
  apply_train_config(s.train, s.model);
  return s;
}

TrainSettings load_train_settings(const std::filesystem::path& path) {
  return settings_from_entries(parse_config_file(path));
}

nlohmann::json model_config_to_json(const ModelConfig& m) {
  return {
      {"word_dim", m.encoder.word_dim},
      {"char_emb_dim", m.encoder.char_emb_dim},
      {"char_window", m.encoder.char_cnn_window},
      {"char_filters", m.encoder.char_cnn_filters},
      {"pos_dim", m.encoder.pos_dim},
      {"hidden_dim", m.encoder.hidden_dim},
      {"char_max_len", m.encoder.char_max_len},
      {"dropout", m.encoder.dropout},
      {"use_char", m.encoder.use_char},
      {"freeze_word_vectors", m.encoder.freeze_word_vectors},
      {"tagger_hidden", m.tagger_hidden},
      {"pse_dim", m.pse_dim},
      {"pht_dim", m.pht_dim},
      {"max_sentence_len", m.max_sentence_len},
      {"no_pht", m.no_pht},
      {"no_hierarchy", m.no_hierarchy},
      {"binary_head_types", m.binary_head_types},
      {"pipeline_mode", m.pipeline_mode},
      {"head_distance_anchor",
       m.head_distance_anchor == HeadAnchor::kStart ? "start" : "end"},
  };
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig m;
  m.encoder.word_dim = j.at("word_dim").get<int>();
  m.encoder.char_emb_dim = j.at("char_emb_dim").get<int>();
  m.encoder.char_cnn_window = j.at("char_window").get<int>();
  m.encoder.char_cnn_filters = j.at("char_filters").get<int>();
  m.encoder.pos_dim = j.at("pos_dim").get<int>();
  m.encoder.hidden_dim = j.at("hidden_dim").get<int>();
  m.encoder.char_max_len = j.at("char_max_len").get<int>();
  m.encoder.dropout = j.at("dropout").get<double>();
  m.encoder.use_char = j.at("use_char").get<bool>();
  m.encoder.freeze_word_vectors = j.at("freeze_word_vectors").get<bool>();
  m.tagger_hidden = j.at("tagger_hidden").get<int>();
  m.pse_dim = j.at("pse_dim").get<int>();
  m.pht_dim = j.at("pht_dim").get<int>();
  m.max_sentence_len = j.at("max_sentence_len").get<int>();
  m.no_pht = j.at("no_pht").get<bool>();
  m.no_hierarchy = j.at("no_hierarchy").get<bool>();
  m.binary_head_types = j.at("binary_head_types").get<bool>();
  m.pipeline_mode = j.at("pipeline_mode").get<bool>();
  m.head_distance_anchor = parse_anchor(j.at("head_distance_anchor").get<std::string>());
  return m;
}

nlohmann::json train_config_to_json(const TrainConfig& t) {
  return {
      {"learning_rate", t.learning_rate},
      {"batch_size", t.batch_size},
      {"dropout", t.dropout},
      {"grad_clip_norm", t.grad_clip_norm},
      {"max_epochs", t.max_epochs},
      {"patience", t.patience},
      {"seed", t.seed},
      {"repeat_heads", t.repeat_heads},
      {"negative_head_sampling", t.negative_head_sampling},
      {"no_char", t.no_char},
      {"no_pht", t.no_pht},
      {"no_hierarchy", t.no_hierarchy},
      {"binary_head_types", t.binary_head_types},
      {"pipeline_mode", t.pipeline_mode},
  };
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig t;
  t.learning_rate = j.at("learning_rate").get<double>();
  t.batch_size = j.at("batch_size").get<int>();
  t.dropout = j.at("dropout").get<double>();
  t.grad_clip_norm = j.at("grad_clip_norm").get<double>();
  t.max_epochs = j.at("max_epochs").get<int>();
  t.patience = j.at("patience").get<int>();
  t.seed = j.at("seed").get<std::uint64_t>();
  t.repeat_heads = j.at("repeat_heads").get<bool>();
  t.negative_head_sampling = j.at("negative_head_sampling").get<bool>();
  t.no_char = j.at("no_char").get<bool>();
  t.no_pht = j.at("no_pht").get<bool>();
  t.no_hierarchy = j.at("no_hierarchy").get<bool>();
  t.binary_head_types = j.at("binary_head_types").get<bool>();
  t.pipeline_mode = j.at("pipeline_mode").get<bool>();
  return t;
}

}  // namespace relspan
