#include "radclust/cnn/tensor.hpp"

namespace radclust::cnn {

std::string Shape3::str() const {
    return std::to_string(height) + "x" + std::to_string(width) + "x" + std::to_string(channels);
}

Tensor Tensor::from_pixels(const imaging::PixelTensor& t) {
    Tensor out(Shape3{t.channels, t.height, t.width});
    for (std::size_t c = 0; c < t.channels; ++c) {
        for (std::size_t y = 0; y < t.height; ++y) {
            for (std::size_t x = 0; x < t.width; ++x) {
                out.at(c, y, x) = t.at(y, x, c);
            }
        }
    }
    return out;
}

} // namespace radclust::cnn
