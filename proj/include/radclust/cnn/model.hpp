#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "radclust/cnn/layers.hpp"
#include "radclust/cnn/tensor.hpp"
#include "radclust/imaging/image.hpp"

namespace radclust::cnn {

namespace layer {
struct Conv {
    std::size_t filters;
};
struct Relu {};
/// Inference only: the identity map, no rescaling.
struct Dropout {
    double rate;
};
struct MaxPool {};
struct Flatten {};
struct Dense {
    std::size_t units;
};
} // namespace layer

using Layer = std::variant<layer::Conv, layer::Relu, layer::Dropout, layer::MaxPool,
                           layer::Flatten, layer::Dense>;

/// Layer topology of the feature extractor.
struct CnnSpec {
    Shape3 input{1, 128, 128};
    std::vector<Layer> layers;

    /// Four blocks of Conv(3x3 same) -> ReLU -> Dropout(0.5) -> MaxPool(2x2)
    /// with 64, 64, 128, 128 filters; Flatten; Dense(64) -> ReLU; Dense(16).
    static CnnSpec standard();

    CnnSpec without_dropout() const;

    std::vector<std::size_t> conv_filters() const;
    std::vector<std::size_t> dense_units() const;
    /// Output width of the final layer.
    std::size_t output_dim() const;
};

/// Parameters for every Conv and Dense layer of a CnnSpec, in layer order.
struct WeightSet {
    std::vector<ConvWeights> convs;
    std::vector<DenseWeights> denses;
    /// Seed used by init_weights, or empty for weights loaded from a file.
    std::optional<std::uint64_t> seed;

    /// Tensor contents only; provenance is ignored.
    bool same_parameters(const WeightSet& other) const {
        return convs == other.convs && denses == other.denses;
    }
};

/// Throws ShapeError when ws does not fit spec and NumericError when a
/// parameter is not finite.
void validate(const CnnSpec& spec, const WeightSet& ws);

/// Correctly shaped all-zero parameters for spec.
WeightSet zero_weights(const CnnSpec& spec);

/// He-normal weights (std = sqrt(2 / fan_in)) with zero biases. Draw order:
/// conv layers first to last, then dense layers first to last; within a
/// layer the storage order ((out, in, ky, kx) or (out, in)).
WeightSet init_weights(const CnnSpec& spec, std::uint64_t seed);

struct FeatureVector {
    std::string id;
    std::vector<double> values;
};

/// Output shape of every layer, in order, for a forward pass. Flattened
/// and dense outputs are reported as (n, 1, 1).
using ShapeTrace = std::vector<Shape3>;

/// Runs spec over input. Throws ShapeError naming the failing layer.
std::vector<double> run(const CnnSpec& spec, const WeightSet& ws, Tensor input,
                        ShapeTrace* trace = nullptr);

/// Standard-topology forward pass over a 128x128x1 tensor.
FeatureVector forward(const imaging::PixelTensor& t, const WeightSet& ws, std::string id = {});

} // namespace radclust::cnn
