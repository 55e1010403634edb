#include <algorithm>
#include <cmath>
#include <string>

#include "radclust/clustering/algorithms.hpp"
#include "radclust/error.hpp"

namespace radclust::clustering {

double median_offdiagonal(const numerics::SymMatrix& d) {
    const std::size_t n = d.size();
    std::vector<double> values;
    values.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            values.push_back(d(i, j));
        }
    }
    if (values.empty()) {
        return 0.0;
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) {
        return upper;
    }
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

numerics::SymMatrix normalized_laplacian(const numerics::SymMatrix& affinity, std::size_t* isolated) {
    const std::size_t n = affinity.size();
    std::vector<double> inv_sqrt(n, 0.0);
    std::size_t lonely = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double degree = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                degree += affinity(i, j);
            }
        }
        if (degree > 0.0) {
            inv_sqrt[i] = 1.0 / std::sqrt(degree);
        } else {
            ++lonely;
        }
    }
    if (isolated != nullptr) {
        *isolated = lonely;
    }
    numerics::SymMatrix lap(n);
    for (std::size_t i = 0; i < n; ++i) {
        lap.set(i, i, 1.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            lap.set(i, j, -inv_sqrt[i] * affinity(i, j) * inv_sqrt[j]);
        }
    }
    return lap;
}

ClusterResult spectral_from_affinity(const numerics::SymMatrix& affinity, const ClusterConfig& cfg,
                                     double sigma) {
    const std::size_t n = affinity.size();
    cfg.validate(n);
    if (n > cfg.spectral_cap) {
        throw ConfigError("spectral clustering is limited to " + std::to_string(cfg.spectral_cap) +
                          " samples, got " + std::to_string(n));
    }

    SpectralDiagnostics diag;
    diag.sigma = sigma;
    const auto lap = normalized_laplacian(affinity, &diag.isolated_points);
    auto eig = numerics::sym_eigen(lap);

    // Eigenvectors of the k smallest Laplacian eigenvalues, i.e. of the k
    // largest eigenvalues of the normalized affinity D^-1/2 W D^-1/2.
    numerics::Matrix embedding(n, cfg.k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < cfg.k; ++j) {
            embedding(i, j) = eig.vectors(i, j);
        }
    }
    numerics::Matrix unit_rows = embedding;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = unit_rows.row(i);
        double norm = 0.0;
        for (double v : row) {
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm > 0.0) {
            for (double& v : row) {
                v /= norm;
            }
        }
    }

    // Seeded k-means++ restarts on the embedding; the first-K rule would
    // start from rows of the same block whenever the data is sorted.
    ClusterConfig inner = cfg;
    inner.init = InitMethod::KMeansPlusPlus;
    inner.n_init = std::max<std::size_t>(cfg.n_init, 10);
    ClusterResult result = kmeans(unit_rows, inner);
    result.centroids.reset();

    diag.eigenvalues = std::move(eig.values);
    diag.embedding = std::move(embedding);
    result.model = std::move(diag);
    return result;
}

ClusterResult spectral(const FeatureMatrix& x, const ClusterConfig& cfg) {
    cfg.validate(x.n());
    if (x.n() > cfg.spectral_cap) {
        throw ConfigError("spectral clustering is limited to " + std::to_string(cfg.spectral_cap) +
                          " samples, got " + std::to_string(x.n()));
    }
    const auto dist = numerics::pairwise_distances(x.values());
    double sigma = cfg.rbf_sigma.value_or(median_offdiagonal(dist));
    if (!(sigma > 0.0)) {
        sigma = 1.0; // every pair coincides; any bandwidth gives a constant affinity
    }
    const double denom = 2.0 * sigma * sigma;
    numerics::SymMatrix affinity(x.n());
    for (std::size_t i = 0; i < x.n(); ++i) {
        for (std::size_t j = i + 1; j < x.n(); ++j) {
            affinity.set(i, j, std::exp(-dist(i, j) * dist(i, j) / denom));
        }
    }
    return spectral_from_affinity(affinity, cfg, sigma);
}

} // namespace radclust::clustering
