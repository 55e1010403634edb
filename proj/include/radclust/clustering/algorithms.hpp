#pragma once

#include "radclust/clustering/feature_matrix.hpp"
#include "radclust/clustering/types.hpp"
#include "radclust/numerics/linalg.hpp"
#include "radclust/numerics/rng.hpp"

namespace radclust::clustering {

/// Lloyd's algorithm. Ties go to the lowest centroid index; an empty
/// cluster takes the point farthest from its centroid. Objective trace is
/// the SSE after each centroid update (non-increasing). With n_init > 1 the
/// restart with the lowest SSE wins (earliest on ties).
ClusterResult kmeans(const FeatureMatrix& x, const ClusterConfig& cfg);
ClusterResult kmeans(const numerics::Matrix& x, const ClusterConfig& cfg);

/// Lloyd iterations from explicit starting centroids (k = rows of init).
ClusterResult kmeans_from(const numerics::Matrix& x, numerics::Matrix init, const ClusterConfig& cfg);

/// Initial centroids according to cfg.init, drawing from rng when needed.
numerics::Matrix initial_centroids(const numerics::Matrix& x, std::size_t k, InitMethod method,
                                   numerics::RngStream& rng);

/// Mini-Batch K-Means with per-center learning rate 1/count.
ClusterResult minibatch_kmeans(const FeatureMatrix& x, const ClusterConfig& cfg);

/// Normalized spectral clustering with a Gaussian RBF affinity.
ClusterResult spectral(const FeatureMatrix& x, const ClusterConfig& cfg);
/// Same pipeline from a precomputed affinity (diagonal ignored).
ClusterResult spectral_from_affinity(const numerics::SymMatrix& affinity, const ClusterConfig& cfg,
                                     double sigma = 0.0);

/// Symmetric normalized Laplacian I - D^-1/2 W D^-1/2. Rows with zero degree
/// get a zero D^-1/2 entry; their count is written to isolated.
numerics::SymMatrix normalized_laplacian(const numerics::SymMatrix& affinity,
                                         std::size_t* isolated = nullptr);

ClusterResult agglomerative(const FeatureMatrix& x, const ClusterConfig& cfg, Linkage linkage);

/// Full merge tree. Average heights are mean Euclidean distances; Ward
/// heights are the increase in within-cluster sum of squares.
Dendrogram build_dendrogram(const numerics::Matrix& x, Linkage linkage);

/// Labels from the first n - k merges; numbered by first row appearance.
Labels cut_dendrogram(const Dendrogram& tree, std::size_t n, std::size_t k);

ClusterResult birch(const FeatureMatrix& x, const ClusterConfig& cfg);

/// 0.5 x median pairwise distance over a seeded subsample of at most 256 rows.
double default_birch_threshold(const numerics::Matrix& x, std::uint64_t seed);

ClusterResult gmm(const FeatureMatrix& x, const ClusterConfig& cfg, CovarianceMode mode);
inline ClusterResult gmm(const FeatureMatrix& x, const ClusterConfig& cfg) {
    return gmm(x, cfg, cfg.covariance_mode);
}

/// Median of the strict upper triangle.
double median_offdiagonal(const numerics::SymMatrix& d);

} // namespace radclust::clustering
