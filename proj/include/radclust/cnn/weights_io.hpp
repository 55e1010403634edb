#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "radclust/cnn/model.hpp"

namespace radclust::cnn {

// Weight file layout, all integers little-endian:
//
//   "OCNN"                      4 bytes
//   version                     u8 (0x01)
//   layer count                 u32
//   per layer: rank u32, then rank x u32 dims
//              conv (out, in, 3, 3), dense (out, in)
//   payload: per layer, weights then biases as IEEE-754 f32
//   CRC-32 (IEEE) of the payload bytes   u32
//
// Conv layers come first, then dense layers, matching WeightSet order.

inline constexpr std::uint8_t kWeightFileVersion = 0x01;

std::vector<std::uint8_t> save_weights(const WeightSet& ws);

/// Parses and checks the shape table against spec. Throws ParseError with
/// the byte offset for bad magic, version mismatch, shape-table mismatch,
/// truncation and checksum failure.
WeightSet load_weights(std::span<const std::uint8_t> bytes,
                       const CnnSpec& spec = CnnSpec::standard());

WeightSet read_weights_file(const std::filesystem::path& path,
                            const CnnSpec& spec = CnnSpec::standard());
void write_weights_file(const std::filesystem::path& path, const WeightSet& ws);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

} // namespace radclust::cnn
