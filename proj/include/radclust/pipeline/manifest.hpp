#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radclust/imaging/image.hpp"

namespace radclust::pipeline {

enum class Sex { Unknown, Male, Female };

struct ManifestEntry {
    std::string path;
    std::optional<imaging::CropRect> crop;
    std::optional<int> age; ///< years, 0..130
    Sex sex = Sex::Unknown;

    bool operator==(const ManifestEntry&) const = default;
};

inline constexpr std::string_view kManifestHeader = "path,crop_x,crop_y,crop_w,crop_h,age,sex";

/// Parses the manifest CSV. ParseError carries the 1-based line and names
/// the offending field.
std::vector<ManifestEntry> read_manifest(std::string_view text);
std::string write_manifest(const std::vector<ManifestEntry>& entries);

} // namespace radclust::pipeline
