#pragma once

// Manifest persistence. A manifest is two files side by side:
//
//   <stem>.jsonl  UTF-8 JSON lines. Line 1 is the header
//                 {"version":1,"dim":D,"metadata":{...}}, followed by one
//                 object per sample and one object per pair.
//   <stem>.bin    "PTTA" | u32 version | u32 dim | float32 vectors, all
//                 little-endian. A rep's "offset" indexes vectors, not bytes.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>

#include "posetta/types.hpp"

namespace posetta {

inline constexpr char kBlobMagic[4] = {'P', 'T', 'T', 'A'};
inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::size_t kBlobHeaderBytes = 12;

/// Vectors whose norm is further than this from 1 are renormalized at load.
inline constexpr double kRenormTolerance = 1e-6;
/// Vectors below this norm cannot be normalized and reject the manifest.
inline constexpr double kZeroNormThreshold = 1e-12;

/// Metadata key recording how many vectors were renormalized during load.
inline constexpr const char* kRenormalizedKey = "renormalized_vectors";

std::filesystem::path blob_path_for(const std::filesystem::path& index_path);

/// Scales `values` to unit L2 norm when it deviates by more than
/// kRenormTolerance. Returns true if the vector changed.
bool normalize_embedding(std::span<float> values);

Manifest load_manifest(const std::filesystem::path& index_path);

/// Validates `m` and writes both files. Payloads are written verbatim.
void save_manifest(const Manifest& m, const std::filesystem::path& index_path);

}  // namespace posetta
