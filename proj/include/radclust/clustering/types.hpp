#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "radclust/numerics/linalg.hpp"

namespace radclust::clustering {

enum class InitMethod {
    FirstK,         ///< the first k rows become the initial centroids
    KMeansPlusPlus, ///< seeded D^2 sampling
};

enum class CovarianceMode { Tied, Diag, Full };

enum class Linkage { Average, Ward };

struct ClusterConfig {
    std::size_t k = 2;
    std::uint64_t seed = 0;
    std::size_t max_iters = 300;
    /// Convergence tolerance: relative SSE decrease for K-Means, center
    /// movement relative to the data spread for Mini-Batch, absolute gain in
    /// mean log-likelihood for GMM.
    double tol = 1e-4;

    InitMethod init = InitMethod::FirstK;
    /// Restarts; only meaningful for randomized initialization.
    std::size_t n_init = 1;

    std::size_t batch_size = 256;
    /// RBF bandwidth; median pairwise distance when unset.
    std::optional<double> rbf_sigma;
    /// Spectral clustering refuses inputs larger than this (dense eigensolve).
    std::size_t spectral_cap = 2000;
    /// CF leaf-entry radius bound; derived from the data when unset.
    std::optional<double> birch_threshold;
    std::size_t birch_branching = 50;
    CovarianceMode covariance_mode = CovarianceMode::Full;
    double covariance_reg = 1e-6;

    /// Throws ConfigError unless 1 <= k <= n and every knob is in range.
    void validate(std::size_t n) const;
};

using Labels = std::vector<int>;

struct GmmModel {
    CovarianceMode mode = CovarianceMode::Full;
    std::vector<double> weights;
    numerics::Matrix means;                    ///< k x d
    std::vector<numerics::Matrix> covariances; ///< k matrices d x d; diagonal in Diag mode,
                                               ///< identical copies in Tied mode
    std::vector<double> regularization;        ///< diagonal load used per component
    numerics::Matrix responsibilities;         ///< n x k
};

struct Merge {
    std::size_t cluster_a; ///< ids: 0..n-1 are points, n + t is the t-th merge
    std::size_t cluster_b;
    double height;
    std::size_t merged_size;
};

struct Dendrogram {
    std::vector<Merge> merges;
};

/// BIRCH clustering feature: count, linear sum, squared-norm sum.
struct CfEntry {
    std::size_t n = 0;
    std::vector<double> ls;
    double ss = 0.0;

    static CfEntry from_point(std::span<const double> x);
    CfEntry& operator+=(const CfEntry& other);
    std::vector<double> centroid() const;
    /// sqrt(SS/N - |LS/N|^2), clamped at zero.
    double radius() const;
};

struct CfTreeStats {
    std::size_t node_count = 0;
    std::size_t leaf_entry_count = 0;
    double threshold = 0.0;
    std::vector<CfEntry> leaf_entries;
};

struct SpectralDiagnostics {
    double sigma = 0.0;
    std::size_t isolated_points = 0;
    std::vector<double> eigenvalues; ///< all Laplacian eigenvalues, ascending
    numerics::Matrix embedding;      ///< n x k eigenvectors before row normalization
};

using ClusterModel = std::variant<std::monostate, GmmModel, Dendrogram, CfTreeStats, SpectralDiagnostics>;

struct ClusterResult {
    Labels labels;
    std::optional<numerics::Matrix> centroids;
    std::vector<double> objective_trace;
    std::size_t iterations = 0;
    bool converged = false;
    ClusterModel model;
};

} // namespace radclust::clustering
