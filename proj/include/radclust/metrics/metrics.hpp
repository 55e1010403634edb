#pragma once

#include <span>
#include <vector>

#include "radclust/clustering/feature_matrix.hpp"
#include "radclust/numerics/linalg.hpp"

namespace radclust::metrics {

struct SilhouetteReport {
    std::vector<double> per_point;
    double mean = 0.0;
    /// Indexed by label value; clusters with no members report 0.
    std::vector<double> per_cluster_mean;
};

/// Rousseeuw silhouette with Euclidean distance. Members of singleton
/// clusters score 0, as do points with a(i) = b(i) = 0. Throws ConfigError
/// for fewer than two distinct labels or a length mismatch, BoundsError for
/// negative labels.
SilhouetteReport silhouette(const clustering::FeatureMatrix& x, std::span<const int> labels);

/// Same, from a precomputed distance matrix.
SilhouetteReport silhouette(const numerics::SymMatrix& dist, std::span<const int> labels);

/// Sum of squared distances to the assigned centroid. Throws BoundsError
/// for a label outside [0, centroids.rows()), ShapeError on mismatched sizes.
double sse(const numerics::Matrix& x, std::span<const int> labels, const numerics::Matrix& centroids);

} // namespace radclust::metrics
