#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "radclust/error.hpp"
#include "radclust/numerics/rng.hpp"
#include "radclust/pipeline/synth.hpp"

namespace radclust::pipeline {

BlobData synth_blobs(std::size_t n_per_blob, std::size_t n_blobs, std::size_t d, double separation,
                     double noise_sigma, std::uint64_t seed) {
    if (n_per_blob < 1 || n_blobs < 1 || d < 1) {
        throw ConfigError("synth_blobs: counts must be at least 1");
    }
    if (!(separation > 0.0) || !(noise_sigma > 0.0)) {
        throw ConfigError("synth_blobs: separation and noise_sigma must be positive");
    }
    if (n_blobs > 2 * d) {
        throw ConfigError("synth_blobs: " + std::to_string(n_blobs) + " blobs need more than the " +
                          std::to_string(2 * d) + " signed axes of a " + std::to_string(d) + "-D space");
    }
    auto rng = numerics::make_rng(seed);
    const std::size_t n = n_per_blob * n_blobs;
    numerics::Matrix x(n, d);
    clustering::Labels truth(n);
    std::vector<std::string> ids(n);
    for (std::size_t b = 0; b < n_blobs; ++b) {
        const std::size_t axis = b % d;
        const double center = b < d ? separation : -separation;
        for (std::size_t p = 0; p < n_per_blob; ++p) {
            const std::size_t i = b * n_per_blob + p;
            for (std::size_t f = 0; f < d; ++f) {
                x(i, f) = (f == axis ? center : 0.0) + noise_sigma * rng.next_gaussian();
            }
            truth[i] = static_cast<int>(b);
            ids[i] = "s" + std::to_string(i);
        }
    }
    return BlobData{clustering::FeatureMatrix(std::move(x), std::move(ids)), std::move(truth)};
}

namespace {

std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

/// Smooth, darker field: a shallow vertical ramp plus grain.
imaging::ImageGray smooth_image(std::size_t size, numerics::RngStream& rng) {
    const double base = 60.0 + 20.0 * rng.next_uniform();
    imaging::ImageGray img(size, size, std::uint8_t{0});
    for (std::size_t y = 0; y < size; ++y) {
        for (std::size_t x = 0; x < size; ++x) {
            const double ramp = 30.0 * static_cast<double>(y) / static_cast<double>(size);
            img.at(x, y) = to_byte(base + ramp + 6.0 * rng.next_gaussian());
        }
    }
    return img;
}

/// Brighter field crossed by oblique stripes (triangle wave, integer
/// phase so every platform draws the same pattern).
imaging::ImageGray striated_image(std::size_t size, numerics::RngStream& rng) {
    const double base = 140.0 + 20.0 * rng.next_uniform();
    const std::size_t period = 6 + rng.next_below(5);
    const std::size_t slope = 1 + rng.next_below(3);
    const std::size_t shift = rng.next_below(period);
    imaging::ImageGray img(size, size, std::uint8_t{0});
    for (std::size_t y = 0; y < size; ++y) {
        for (std::size_t x = 0; x < size; ++x) {
            const std::size_t t = (x + slope * y + shift) % period;
            const std::size_t tri = std::min(t, period - t);
            const double wave = 2.0 * static_cast<double>(tri) / static_cast<double>(period) - 0.5;
            img.at(x, y) = to_byte(base + 80.0 * wave + 6.0 * rng.next_gaussian());
        }
    }
    return img;
}

} // namespace

ImageSet synth_images(std::size_t count, std::size_t size, std::uint64_t seed) {
    if (count < 1 || size < 1) {
        throw ConfigError("synth_images: count and size must be at least 1");
    }
    auto master = numerics::make_rng(seed);
    ImageSet set;
    for (std::size_t i = 0; i < count; ++i) {
        auto rng = master.fork();
        char name[32];
        std::snprintf(name, sizeof name, "img%03zu.pgm", i);
        const int population = static_cast<int>(i % 2);
        SyntheticImage s{name, population == 0 ? smooth_image(size, rng) : striated_image(size, rng), population};

        ManifestEntry e;
        e.path = s.name;
        e.crop = imaging::CropRect{0, 0, size, size};
        e.age = 40 + static_cast<int>(rng.next_below(51));
        e.sex = rng.next_below(2) == 0 ? Sex::Male : Sex::Female;

        set.images.push_back(std::move(s));
        set.manifest.push_back(std::move(e));
    }
    return set;
}

} // namespace radclust::pipeline
