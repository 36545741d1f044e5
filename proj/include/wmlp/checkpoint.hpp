#pragma once

#include <cstdint>
#include <filesystem>

#include "wmlp/neuralnet.hpp"

namespace wmlp::nn {

inline constexpr char kCheckpointMagic[4] = {'W', 'M', 'L', 'P'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Layout (all little-endian): "WMLP", u32 version, u32 input_dim, u32 hidden_dim,
/// u32 output_dim, then w1, b1, w2, b2 as row-major f64.
void save_checkpoint(const MlpParams& p, const std::filesystem::path& path);

/// Throws CorruptCheckpointError on bad magic, unknown version, inconsistent
/// header or a payload that does not match the header.
MlpParams load_checkpoint(const std::filesystem::path& path);

}  // namespace wmlp::nn
