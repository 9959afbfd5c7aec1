#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "emolex/vae.hpp"

namespace emolex {

// JSON container for a trained model: config, schema registry, scaling
// constants, weights and the training log. Doubles are written in shortest
// round-trip form, so read(write(c)) == c exactly.
struct Checkpoint {
  static constexpr int format_version = 1;

  std::vector<std::string> header;  // provenance lines (command, seed, version)
  vae::TrainConfig config;
  vae::ModelParams params;
  std::vector<vae::EpochLog> log;
};

// Stable content hash of the weights and schemas, as 16 hex digits.
std::string checkpoint_id(const vae::ModelParams& params);

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in, const std::string& source);
void save_checkpoint(const std::filesystem::path& file, const Checkpoint& checkpoint);
// Throws InputError when the file is missing or not a checkpoint.
Checkpoint load_checkpoint(const std::filesystem::path& file);

}  // namespace emolex
