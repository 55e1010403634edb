#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>

#include "radclust/numerics/linalg.hpp"

namespace radclust::clustering::detail {

/// (index, squared distance) of the closest centroid; ties -> lowest index.
inline std::pair<std::size_t, double> nearest(std::span<const double> x,
                                              const numerics::Matrix& centroids) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centroids.rows(); ++j) {
        const double d = numerics::squared_distance(x, centroids.row(j));
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return {best, best_d};
}

} // namespace radclust::clustering::detail
