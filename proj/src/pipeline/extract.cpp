#include <algorithm>
#include <atomic>
#include <exception>
#include <string>
#include <thread>

#include "radclust/error.hpp"
#include "radclust/pipeline/extract.hpp"
#include "radclust/pipeline/features_io.hpp"

namespace radclust::pipeline {

imaging::ImageGray preprocess_image(const imaging::ImageGray& img, const std::optional<imaging::CropRect>& crop,
                                    std::size_t size) {
    if (size < 1) {
        throw ConfigError("target size must be at least 1");
    }
    if (crop) {
        return imaging::resize(imaging::crop(img, *crop), size, size);
    }
    return imaging::resize(img, size, size);
}

std::string image_id(const std::filesystem::path& path) {
    std::string id = path.stem().string();
    if (!valid_id(id)) {
        throw ConfigError("image name '" + path.filename().string() +
                          "' does not give a usable row id; use only [A-Za-z0-9._-]");
    }
    return id;
}

clustering::FeatureMatrix extract_features(const std::vector<NamedImage>& images, const cnn::WeightSet& ws,
                                           std::size_t threads) {
    if (images.empty()) {
        throw ConfigError("no images to extract features from");
    }
    const std::size_t n = images.size();
    std::vector<std::vector<double>> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                rows[i] = cnn::forward(imaging::normalize(images[i].image), ws, images[i].id).values;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, n);
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(work);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const ShapeError& e) {
                throw ShapeError("image " + images[i].id + ": " + e.what());
            }
        }
    }

    const std::size_t d = rows[0].size();
    numerics::Matrix values(n, d);
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(rows[i].begin(), rows[i].end(), values.row(i).begin());
        ids[i] = images[i].id;
    }
    return clustering::FeatureMatrix(std::move(values), std::move(ids));
}

std::vector<NamedImage> load_manifest_images(const std::vector<ManifestEntry>& entries,
                                             const std::filesystem::path& base) {
    std::vector<NamedImage> images;
    images.reserve(entries.size());
    for (const auto& e : entries) {
        const std::filesystem::path p = base / e.path;
        images.push_back(NamedImage{image_id(p), imaging::read_pgm_file(p)});
    }
    return images;
}

} // namespace radclust::pipeline
