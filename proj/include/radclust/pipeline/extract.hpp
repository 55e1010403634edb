#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "radclust/clustering/feature_matrix.hpp"
#include "radclust/cnn/model.hpp"
#include "radclust/imaging/image.hpp"
#include "radclust/pipeline/manifest.hpp"

namespace radclust::pipeline {

/// Optional crop, then resize to size x size.
imaging::ImageGray preprocess_image(const imaging::ImageGray& img, const std::optional<imaging::CropRect>& crop,
                                    std::size_t size);

/// Row id for an image path: the file stem.
std::string image_id(const std::filesystem::path& path);

struct NamedImage {
    std::string id;
    imaging::ImageGray image;
};

/// One CNN feature row per image, in input order. Images must match the
/// network input size. threads == 0 uses the hardware concurrency.
clustering::FeatureMatrix extract_features(const std::vector<NamedImage>& images, const cnn::WeightSet& ws,
                                           std::size_t threads = 0);

/// Resolves manifest paths relative to base.
std::vector<NamedImage> load_manifest_images(const std::vector<ManifestEntry>& entries,
                                             const std::filesystem::path& base);

} // namespace radclust::pipeline
