#pragma once

#include <filesystem>
#include <memory>

#include "relspan/config.hpp"
#include "relspan/extractors.hpp"

namespace relspan {

struct CheckpointMeta {
  int schema_version = 1;
  ModelConfig model;
  TrainConfig train;
  double dev_f1 = 0.0;
  long global_step = 0;
};

// Writes manifest.json, params.bin and the vocabulary files into `dir`
// (created if missing). Overwrites a previous checkpoint in place.
void save_checkpoint(const std::filesystem::path& dir, const JointModel& model,
                     const TrainConfig& train, double dev_f1,
                     long global_step);

struct LoadedCheckpoint {
  std::unique_ptr<JointModel> model;
  CheckpointMeta meta;
};

// Rebuilds the model from the stored configuration and parameter tensors.
// Every stored tensor must match a model parameter in name and shape, and
// every model parameter must be covered.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace relspan
