#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "macs/nn.hpp"

namespace macs {

/// Binary checkpoint layout (all integers and floats little-endian):
///
///   magic        8 bytes  "MACSNET\0"
///   version      u32      kCheckpointVersion
///   arms         u32
///   trunk1       u32
///   trunk2       u32
///   head_hidden  u32
///   input_scale  f64
///   input_cap    f64      +inf when uncapped
///   adam_step    u64
///   tensors      f64[]    weights, then Adam first moments, then second
///                         moments; each set in NetTensors declaration order,
///                         each tensor column-major
inline constexpr std::uint32_t kCheckpointVersion = 2;

std::vector<std::uint8_t> serialize_checkpoint(const BranchingNet& net);
BranchingNet deserialize_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const BranchingNet& net, const std::filesystem::path& path);
BranchingNet load_checkpoint(const std::filesystem::path& path);

}  // namespace macs
