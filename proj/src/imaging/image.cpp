#include "radclust/imaging/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radclust/error.hpp"

namespace radclust::imaging {

ImageGray::ImageGray(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width_ == 0 || height_ == 0) {
        throw ShapeError("image dimensions must be positive, got " + std::to_string(width_) + "x" +
                         std::to_string(height_));
    }
    if (pixels_.size() != width_ * height_) {
        throw ShapeError("image " + std::to_string(width_) + "x" + std::to_string(height_) +
                         " needs " + std::to_string(width_ * height_) + " pixels, got " +
                         std::to_string(pixels_.size()));
    }
}

ImageGray::ImageGray(std::size_t width, std::size_t height, std::uint8_t fill)
    : ImageGray(width, height, std::vector<std::uint8_t>(width * height, fill)) {}

ImageGray crop(const ImageGray& img, const CropRect& rect) {
    if (rect.w == 0 || rect.h == 0) {
        throw BoundsError("crop rect must be non-empty, got " + std::to_string(rect.w) + "x" +
                          std::to_string(rect.h));
    }
    if (rect.x + rect.w > img.width()) {
        throw BoundsError("crop x + w = " + std::to_string(rect.x + rect.w) +
                          " exceeds image width " + std::to_string(img.width()));
    }
    if (rect.y + rect.h > img.height()) {
        throw BoundsError("crop y + h = " + std::to_string(rect.y + rect.h) +
                          " exceeds image height " + std::to_string(img.height()));
    }
    std::vector<std::uint8_t> out;
    out.reserve(rect.w * rect.h);
    for (std::size_t j = 0; j < rect.h; ++j) {
        const auto row = img.pixels().subspan((rect.y + j) * img.width() + rect.x, rect.w);
        out.insert(out.end(), row.begin(), row.end());
    }
    return ImageGray(rect.w, rect.h, std::move(out));
}

namespace {

ImageGray area_downscale(const ImageGray& img, std::size_t out_w, std::size_t out_h) {
    const std::size_t fx = img.width() / out_w;
    const std::size_t fy = img.height() / out_h;
    const std::size_t count = fx * fy;
    std::vector<std::uint8_t> out(out_w * out_h);
    for (std::size_t oy = 0; oy < out_h; ++oy) {
        for (std::size_t ox = 0; ox < out_w; ++ox) {
            std::size_t sum = 0;
            for (std::size_t dy = 0; dy < fy; ++dy) {
                for (std::size_t dx = 0; dx < fx; ++dx) {
                    sum += img.at(ox * fx + dx, oy * fy + dy);
                }
            }
            out[oy * out_w + ox] = static_cast<std::uint8_t>((2 * sum + count) / (2 * count));
        }
    }
    return ImageGray(out_w, out_h, std::move(out));
}

ImageGray bilinear(const ImageGray& img, std::size_t out_w, std::size_t out_h) {
    const double sx = static_cast<double>(img.width()) / static_cast<double>(out_w);
    const double sy = static_cast<double>(img.height()) / static_cast<double>(out_h);
    const double max_x = static_cast<double>(img.width() - 1);
    const double max_y = static_cast<double>(img.height() - 1);
    std::vector<std::uint8_t> out(out_w * out_h);
    for (std::size_t oy = 0; oy < out_h; ++oy) {
        const double src_y = std::clamp((static_cast<double>(oy) + 0.5) * sy - 0.5, 0.0, max_y);
        const auto y0 = static_cast<std::size_t>(src_y);
        const std::size_t y1 = std::min(y0 + 1, img.height() - 1);
        const double wy = src_y - static_cast<double>(y0);
        for (std::size_t ox = 0; ox < out_w; ++ox) {
            const double src_x =
                std::clamp((static_cast<double>(ox) + 0.5) * sx - 0.5, 0.0, max_x);
            const auto x0 = static_cast<std::size_t>(src_x);
            const std::size_t x1 = std::min(x0 + 1, img.width() - 1);
            const double wx = src_x - static_cast<double>(x0);
            const double top = (1.0 - wx) * img.at(x0, y0) + wx * img.at(x1, y0);
            const double bottom = (1.0 - wx) * img.at(x0, y1) + wx * img.at(x1, y1);
            const double value = (1.0 - wy) * top + wy * bottom;
            out[oy * out_w + ox] =
                static_cast<std::uint8_t>(std::clamp(std::floor(value + 0.5), 0.0, 255.0));
        }
    }
    return ImageGray(out_w, out_h, std::move(out));
}

} // namespace

ImageGray resize(const ImageGray& img, std::size_t out_w, std::size_t out_h) {
    if (out_w == 0 || out_h == 0) {
        throw ShapeError("resize target must be positive, got " + std::to_string(out_w) + "x" +
                         std::to_string(out_h));
    }
    if (out_w == img.width() && out_h == img.height()) {
        return img;
    }
    const bool integer_factor = img.width() % out_w == 0 && img.height() % out_h == 0;
    if (integer_factor) {
        return area_downscale(img, out_w, out_h);
    }
    return bilinear(img, out_w, out_h);
}

PixelTensor normalize(const ImageGray& img) {
    PixelTensor t{img.height(), img.width(), 1, std::vector<double>(img.pixels().size())};
    std::transform(img.pixels().begin(), img.pixels().end(), t.values.begin(),
                   [](std::uint8_t p) { return static_cast<double>(p) / 255.0; });
    return t;
}

} // namespace radclust::imaging
