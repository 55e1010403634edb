#include "radclust/cnn/layers.hpp"

#include <algorithm>
#include <string>

#include "radclust/error.hpp"

namespace radclust::cnn {

Tensor conv2d(const Tensor& input, const ConvWeights& w) {
    if (w.in_channels != input.shape.channels) {
        throw ShapeError("conv2d: kernel expects " + std::to_string(w.in_channels) +
                         " input channels, tensor has " + std::to_string(input.shape.channels));
    }
    const std::size_t h = input.shape.height;
    const std::size_t width = input.shape.width;
    Tensor out(Shape3{w.out_channels, h, width});
    const std::size_t plane = h * width;

    for (std::size_t o = 0; o < w.out_channels; ++o) {
        double* dst = out.values.data() + o * plane;
        std::fill(dst, dst + plane, static_cast<double>(w.bias[o]));
        for (std::size_t i = 0; i < w.in_channels; ++i) {
            const double* src = input.values.data() + i * plane;
            for (std::size_t ky = 0; ky < kKernelSize; ++ky) {
                // Output rows y whose source row y + ky - 1 lies inside the image.
                const std::size_t y_begin = ky == 0 ? 1 : 0;
                const std::size_t y_end = ky == 2 ? h - 1 : h;
                for (std::size_t kx = 0; kx < kKernelSize; ++kx) {
                    const double weight = w.k(o, i, ky, kx);
                    if (weight == 0.0) {
                        continue;
                    }
                    const std::size_t x_begin = kx == 0 ? 1 : 0;
                    const std::size_t x_end = kx == 2 ? width - 1 : width;
                    for (std::size_t y = y_begin; y < y_end; ++y) {
                        double* out_row = dst + y * width;
                        const double* in_row = src + (y + ky - 1) * width;
                        for (std::size_t x = x_begin; x < x_end; ++x) {
                            out_row[x] += weight * in_row[x + kx - 1];
                        }
                    }
                }
            }
        }
    }
    return out;
}

Tensor relu(Tensor t) {
    for (double& v : t.values) {
        v = std::max(0.0, v);
    }
    return t;
}

std::vector<double> relu(std::vector<double> v) {
    for (double& x : v) {
        x = std::max(0.0, x);
    }
    return v;
}

Tensor maxpool2d(const Tensor& t) {
    if (t.shape.height % 2 != 0 || t.shape.width % 2 != 0) {
        throw ShapeError("maxpool2d needs even height and width, got " + t.shape.str());
    }
    Tensor out(Shape3{t.shape.channels, t.shape.height / 2, t.shape.width / 2});
    for (std::size_t c = 0; c < t.shape.channels; ++c) {
        for (std::size_t y = 0; y < out.shape.height; ++y) {
            for (std::size_t x = 0; x < out.shape.width; ++x) {
                out.at(c, y, x) = std::max({t.at(c, 2 * y, 2 * x), t.at(c, 2 * y, 2 * x + 1),
                                            t.at(c, 2 * y + 1, 2 * x), t.at(c, 2 * y + 1, 2 * x + 1)});
            }
        }
    }
    return out;
}

std::vector<double> dense(std::span<const double> v, const DenseWeights& w) {
    if (v.size() != w.in_features) {
        throw ShapeError("dense: layer expects " + std::to_string(w.in_features) +
                         " inputs, got " + std::to_string(v.size()));
    }
    std::vector<double> out(w.out_features);
    for (std::size_t o = 0; o < w.out_features; ++o) {
        const float* row = w.weight.data() + o * w.in_features;
        double sum = 0.0;
        for (std::size_t i = 0; i < w.in_features; ++i) {
            sum += static_cast<double>(row[i]) * v[i];
        }
        out[o] = sum + static_cast<double>(w.bias[o]);
    }
    return out;
}

} // namespace radclust::cnn
