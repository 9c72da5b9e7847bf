#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "relspan/extractors.hpp"

namespace relspan {

struct TrainConfig {
  double learning_rate = 0.001;
  int batch_size = 64;
  double dropout = 0.4;
  double grad_clip_norm = 5.0;
  int max_epochs = 100;
  int patience = 10;
  std::uint64_t seed = 1;
  bool repeat_heads = false;
  // Adds one random non-head span with all-"O" TER targets per sentence.
  bool negative_head_sampling = false;
  bool no_char = false;
  bool no_pht = false;
  bool no_hierarchy = false;
  bool binary_head_types = false;
  bool pipeline_mode = false;

  void validate() const;  // throws std::invalid_argument
};

// Everything the train subcommand reads from one config file.
struct TrainSettings {
  TrainConfig train;
  ModelConfig model;
  std::string pretrained_vectors;  // empty = random initialization
  int seeds = 1;                   // independent runs; mean and stdev reported
  int min_token_freq = 1;
};

// Copies the ablation switches and dropout from the training config into
// the model structure.
void apply_train_config(const TrainConfig& t, ModelConfig& m);

// Flat "key = value" file; '#' starts a comment. Unknown keys throw.
std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path);
TrainSettings settings_from_entries(
    const std::map<std::string, std::string>& entries);
TrainSettings load_train_settings(const std::filesystem::path& path);

nlohmann::json model_config_to_json(const ModelConfig& m);
ModelConfig model_config_from_json(const nlohmann::json& j);
nlohmann::json train_config_to_json(const TrainConfig& t);
TrainConfig train_config_from_json(const nlohmann::json& j);

}  // namespace relspan
