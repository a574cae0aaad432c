#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "affect/adam.hpp"
#include "affect/model.hpp"

namespace affect {

// Versioned text checkpoint: model spec fields, parameter arrays written with
// 17 significant digits (exact double round-trip), optional optimizer
// moments, and an FNV-1a payload checksum.
inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
    int version = kCheckpointVersion;
    ModelSpec spec;
    ParamSet params;
    std::optional<OptimizerState> optimizer;
    std::string config_digest;  // hex digest of the training config, or empty
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
void save_checkpoint(const Model& model, const std::filesystem::path& path,
                     const std::string& config_digest = "");
Checkpoint load_checkpoint(const std::filesystem::path& path);

Model model_from_checkpoint(const Checkpoint& ckpt);

}  // namespace affect
