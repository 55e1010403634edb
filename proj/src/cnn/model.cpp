#include "radclust/cnn/model.hpp"

#include <cmath>

#include "radclust/error.hpp"
#include "radclust/numerics/rng.hpp"

namespace radclust::cnn {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

CnnSpec CnnSpec::standard() {
    CnnSpec spec;
    for (std::size_t filters : {64, 64, 128, 128}) {
        spec.layers.emplace_back(layer::Conv{filters});
        spec.layers.emplace_back(layer::Relu{});
        spec.layers.emplace_back(layer::Dropout{0.5});
        spec.layers.emplace_back(layer::MaxPool{});
    }
    spec.layers.emplace_back(layer::Flatten{});
    spec.layers.emplace_back(layer::Dense{64});
    spec.layers.emplace_back(layer::Relu{});
    spec.layers.emplace_back(layer::Dense{16});
    return spec;
}

CnnSpec CnnSpec::without_dropout() const {
    CnnSpec out{input, {}};
    for (const auto& l : layers) {
        if (!std::holds_alternative<layer::Dropout>(l)) {
            out.layers.push_back(l);
        }
    }
    return out;
}

std::vector<std::size_t> CnnSpec::conv_filters() const {
    std::vector<std::size_t> out;
    for (const auto& l : layers) {
        if (const auto* c = std::get_if<layer::Conv>(&l)) {
            out.push_back(c->filters);
        }
    }
    return out;
}

std::vector<std::size_t> CnnSpec::dense_units() const {
    std::vector<std::size_t> out;
    for (const auto& l : layers) {
        if (const auto* d = std::get_if<layer::Dense>(&l)) {
            out.push_back(d->units);
        }
    }
    return out;
}

std::size_t CnnSpec::output_dim() const {
    const auto units = dense_units();
    return units.empty() ? 0 : units.back();
}

namespace {

/// Expected (out, in) pairs for each parametrized layer, derived by walking
/// the shape chain.
struct ParamShapes {
    std::vector<std::pair<std::size_t, std::size_t>> convs;
    std::vector<std::pair<std::size_t, std::size_t>> denses;
};

ParamShapes param_shapes(const CnnSpec& spec) {
    ParamShapes out;
    Shape3 shape = spec.input;
    bool flat = false;
    for (std::size_t idx = 0; idx < spec.layers.size(); ++idx) {
        std::visit(overloaded{
                       [&](const layer::Conv& c) {
                           out.convs.emplace_back(c.filters, shape.channels);
                           shape.channels = c.filters;
                       },
                       [&](const layer::MaxPool&) {
                           shape.height /= 2;
                           shape.width /= 2;
                       },
                       [&](const layer::Flatten&) {
                           shape = Shape3{shape.size(), 1, 1};
                           flat = true;
                       },
                       [&](const layer::Dense& d) {
                           if (!flat) {
                               throw ShapeError("layer " + std::to_string(idx) +
                                                ": dense layer before flatten");
                           }
                           out.denses.emplace_back(d.units, shape.channels);
                           shape = Shape3{d.units, 1, 1};
                       },
                       [](const auto&) {},
                   },
                   spec.layers[idx]);
    }
    return out;
}

bool all_finite(const std::vector<float>& v) {
    for (float x : v) {
        if (!std::isfinite(x)) {
            return false;
        }
    }
    return true;
}

} // namespace

void validate(const CnnSpec& spec, const WeightSet& ws) {
    const auto shapes = param_shapes(spec);
    if (ws.convs.size() != shapes.convs.size() || ws.denses.size() != shapes.denses.size()) {
        throw ShapeError("weight set has " + std::to_string(ws.convs.size()) + " conv and " +
                         std::to_string(ws.denses.size()) + " dense layers, topology needs " +
                         std::to_string(shapes.convs.size()) + " and " +
                         std::to_string(shapes.denses.size()));
    }
    for (std::size_t i = 0; i < ws.convs.size(); ++i) {
        const auto& c = ws.convs[i];
        const auto [out, in] = shapes.convs[i];
        if (c.out_channels != out || c.in_channels != in ||
            c.kernel.size() != out * in * kKernelSize * kKernelSize || c.bias.size() != out) {
            throw ShapeError("conv layer " + std::to_string(i + 1) + ": expected " +
                             std::to_string(out) + "x" + std::to_string(in) + "x3x3, got " +
                             std::to_string(c.out_channels) + "x" + std::to_string(c.in_channels) +
                             "x3x3");
        }
        if (!all_finite(c.kernel) || !all_finite(c.bias)) {
            throw NumericError("conv layer " + std::to_string(i + 1) + " has non-finite weights");
        }
    }
    for (std::size_t i = 0; i < ws.denses.size(); ++i) {
        const auto& d = ws.denses[i];
        const auto [out, in] = shapes.denses[i];
        if (d.out_features != out || d.in_features != in || d.weight.size() != out * in ||
            d.bias.size() != out) {
            throw ShapeError("dense layer " + std::to_string(i + 1) + ": expected " +
                             std::to_string(out) + "x" + std::to_string(in) + ", got " +
                             std::to_string(d.out_features) + "x" + std::to_string(d.in_features));
        }
        if (!all_finite(d.weight) || !all_finite(d.bias)) {
            throw NumericError("dense layer " + std::to_string(i + 1) + " has non-finite weights");
        }
    }
}

WeightSet zero_weights(const CnnSpec& spec) {
    const auto shapes = param_shapes(spec);
    WeightSet ws;
    for (const auto& [out, in] : shapes.convs) {
        ws.convs.push_back(ConvWeights{out, in,
                                       std::vector<float>(out * in * kKernelSize * kKernelSize),
                                       std::vector<float>(out, 0.0f)});
    }
    for (const auto& [out, in] : shapes.denses) {
        ws.denses.push_back(
            DenseWeights{out, in, std::vector<float>(out * in), std::vector<float>(out, 0.0f)});
    }
    return ws;
}

WeightSet init_weights(const CnnSpec& spec, std::uint64_t seed) {
    WeightSet ws = zero_weights(spec);
    ws.seed = seed;
    auto rng = numerics::make_rng(seed);
    for (auto& c : ws.convs) {
        const double fan_in = static_cast<double>(c.in_channels * kKernelSize * kKernelSize);
        const double stddev = std::sqrt(2.0 / fan_in);
        for (float& w : c.kernel) {
            w = static_cast<float>(stddev * rng.next_gaussian());
        }
    }
    for (auto& d : ws.denses) {
        const double stddev = std::sqrt(2.0 / static_cast<double>(d.in_features));
        for (float& w : d.weight) {
            w = static_cast<float>(stddev * rng.next_gaussian());
        }
    }
    return ws;
}

std::vector<double> run(const CnnSpec& spec, const WeightSet& ws, Tensor input, ShapeTrace* trace) {
    if (!(input.shape == spec.input)) {
        throw ShapeError("layer 0 (input): expected " + spec.input.str() + ", got " +
                         input.shape.str());
    }
    Tensor x = std::move(input);
    std::vector<double> flat;
    bool is_flat = false;
    std::size_t conv_idx = 0;
    std::size_t dense_idx = 0;

    for (std::size_t idx = 0; idx < spec.layers.size(); ++idx) {
        const std::string where = "layer " + std::to_string(idx + 1);
        try {
            std::visit(overloaded{
                           [&](const layer::Conv&) {
                               if (is_flat || conv_idx >= ws.convs.size()) {
                                   throw ShapeError("no conv weights for this layer");
                               }
                               x = conv2d(x, ws.convs[conv_idx++]);
                           },
                           [&](const layer::Relu&) {
                               if (is_flat) {
                                   flat = relu(std::move(flat));
                               } else {
                                   x = relu(std::move(x));
                               }
                           },
                           [](const layer::Dropout&) {},
                           [&](const layer::MaxPool&) { x = maxpool2d(x); },
                           [&](const layer::Flatten&) {
                               flat = std::move(x.values);
                               is_flat = true;
                           },
                           [&](const layer::Dense&) {
                               if (!is_flat || dense_idx >= ws.denses.size()) {
                                   throw ShapeError("no dense weights for this layer");
                               }
                               flat = dense(flat, ws.denses[dense_idx++]);
                           },
                       },
                       spec.layers[idx]);
        } catch (const ShapeError& e) {
            throw ShapeError(where + ": " + e.what());
        }
        if (trace != nullptr) {
            trace->push_back(is_flat ? Shape3{flat.size(), 1, 1} : x.shape);
        }
    }
    if (!is_flat) {
        flat = std::move(x.values);
    }
    return flat;
}

FeatureVector forward(const imaging::PixelTensor& t, const WeightSet& ws, std::string id) {
    static const CnnSpec spec = CnnSpec::standard();
    return FeatureVector{std::move(id), run(spec, ws, Tensor::from_pixels(t))};
}

} // namespace radclust::cnn
