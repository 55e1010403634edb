#include <algorithm>
#include <limits>
#include <string>

#include "radclust/error.hpp"
#include "radclust/metrics/metrics.hpp"

namespace radclust::metrics {

SilhouetteReport silhouette(const numerics::SymMatrix& dist, std::span<const int> labels) {
    const std::size_t n = dist.size();
    if (labels.size() != n) {
        throw ConfigError("silhouette: " + std::to_string(labels.size()) + " labels for " +
                          std::to_string(n) + " samples");
    }
    int max_label = -1;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] < 0) {
            throw BoundsError("silhouette: negative label at row " + std::to_string(i));
        }
        max_label = std::max(max_label, labels[i]);
    }
    const std::size_t k = static_cast<std::size_t>(max_label + 1);
    std::vector<std::size_t> counts(k, 0);
    for (int l : labels) {
        ++counts[static_cast<std::size_t>(l)];
    }
    if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2) {
        throw ConfigError("silhouette undefined for one cluster");
    }

    SilhouetteReport report;
    report.per_point.resize(n);
    std::vector<double> sums(k);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                sums[static_cast<std::size_t>(labels[j])] += dist(i, j);
            }
        }
        const auto own = static_cast<std::size_t>(labels[i]);
        if (counts[own] == 1) {
            report.per_point[i] = 0.0;
            continue;
        }
        const double a = sums[own] / static_cast<double>(counts[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            if (c != own && counts[c] > 0) {
                b = std::min(b, sums[c] / static_cast<double>(counts[c]));
            }
        }
        const double denom = std::max(a, b);
        report.per_point[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }

    double total = 0.0;
    report.per_cluster_mean.assign(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        total += report.per_point[i];
        report.per_cluster_mean[static_cast<std::size_t>(labels[i])] += report.per_point[i];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) {
            report.per_cluster_mean[c] /= static_cast<double>(counts[c]);
        }
    }
    report.mean = total / static_cast<double>(n);
    return report;
}

SilhouetteReport silhouette(const clustering::FeatureMatrix& x, std::span<const int> labels) {
    return silhouette(numerics::pairwise_distances(x.values()), labels);
}

} // namespace radclust::metrics
