#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "radclust/cnn/tensor.hpp"

namespace radclust::cnn {

inline constexpr std::size_t kKernelSize = 3;

/// 3x3 kernels stored (out, in, ky, kx) in 32-bit floats.
struct ConvWeights {
    std::size_t out_channels = 0;
    std::size_t in_channels = 0;
    std::vector<float> kernel;
    std::vector<float> bias;

    float k(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) const noexcept {
        return kernel[((o * in_channels + i) * kKernelSize + ky) * kKernelSize + kx];
    }
    bool operator==(const ConvWeights&) const = default;
};

/// Row-major (out, in) matrix.
struct DenseWeights {
    std::size_t out_features = 0;
    std::size_t in_features = 0;
    std::vector<float> weight;
    std::vector<float> bias;

    bool operator==(const DenseWeights&) const = default;
};

/// Stride-1 cross-correlation with zero padding 1 ("same" output size).
/// Throws ShapeError when the kernel and tensor channel counts differ.
Tensor conv2d(const Tensor& input, const ConvWeights& w);

Tensor relu(Tensor t);
std::vector<double> relu(std::vector<double> v);

/// Non-overlapping 2x2 max, stride 2. Throws ShapeError on odd height/width.
Tensor maxpool2d(const Tensor& t);

/// W * v + b. Throws ShapeError when v's length differs from W's columns.
std::vector<double> dense(std::span<const double> v, const DenseWeights& w);

} // namespace radclust::cnn
