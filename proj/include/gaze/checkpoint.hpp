#pragma once

#include <filesystem>

#include "gaze/model.hpp"

namespace gaze {

// GZAT checkpoint container; save/load round-trips bit-exactly.
void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace gaze
