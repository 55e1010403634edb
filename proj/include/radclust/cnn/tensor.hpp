#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "radclust/imaging/image.hpp"

namespace radclust::cnn {

struct Shape3 {
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;

    std::size_t size() const noexcept { return channels * height * width; }
    std::string str() const;
    bool operator==(const Shape3&) const = default;
};

/// Activation tensor, channel-major (c, y, x). Flattening walks channel,
/// then row, then column, which is exactly the storage order.
struct Tensor {
    Shape3 shape;
    std::vector<double> values;

    Tensor() = default;
    explicit Tensor(Shape3 s, double fill = 0.0) : shape(s), values(s.size(), fill) {}

    double& at(std::size_t c, std::size_t y, std::size_t x) noexcept {
        return values[(c * shape.height + y) * shape.width + x];
    }
    double at(std::size_t c, std::size_t y, std::size_t x) const noexcept {
        return values[(c * shape.height + y) * shape.width + x];
    }

    static Tensor from_pixels(const imaging::PixelTensor& t);
};

} // namespace radclust::cnn
