#include <string>

#include "radclust/error.hpp"
#include "radclust/metrics/metrics.hpp"

namespace radclust::metrics {

double sse(const numerics::Matrix& x, std::span<const int> labels, const numerics::Matrix& centroids) {
    if (labels.size() != x.rows() || centroids.cols() != x.cols()) {
        throw ShapeError("sse: " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                         " data, " + std::to_string(labels.size()) + " labels, " +
                         std::to_string(centroids.rows()) + "x" + std::to_string(centroids.cols()) +
                         " centroids");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= centroids.rows()) {
            throw BoundsError("sse: label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                              " outside [0, " + std::to_string(centroids.rows()) + ")");
        }
        total += numerics::squared_distance(x.row(i), centroids.row(static_cast<std::size_t>(labels[i])));
    }
    return total;
}

} // namespace radclust::metrics
