#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "radclust/clustering/feature_matrix.hpp"
#include "radclust/clustering/types.hpp"
#include "radclust/imaging/image.hpp"
#include "radclust/pipeline/manifest.hpp"

namespace radclust::pipeline {

struct BlobData {
    clustering::FeatureMatrix features;
    clustering::Labels truth;
};

/// Isotropic Gaussian blobs. Blob b is centred at +separation * e_b for
/// b < d and at -separation * e_(b-d) after that; rows are blob-major.
/// Throws ConfigError for zero counts, non-positive scales or n_blobs > 2d.
BlobData synth_blobs(std::size_t n_per_blob, std::size_t n_blobs, std::size_t d, double separation,
                     double noise_sigma, std::uint64_t seed);

struct SyntheticImage {
    std::string name; ///< file name, e.g. "img007.pgm"
    imaging::ImageGray image;
    int population;   ///< 0: smooth, darker; 1: striated, brighter
};

struct ImageSet {
    std::vector<SyntheticImage> images;
    std::vector<ManifestEntry> manifest;
};

/// count square images of the given side, populations alternating. Each
/// manifest entry carries a full-frame crop and seeded age/sex metadata.
ImageSet synth_images(std::size_t count, std::size_t size, std::uint64_t seed);

} // namespace radclust::pipeline
