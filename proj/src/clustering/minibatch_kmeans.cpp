#include <algorithm>
#include <cmath>
#include <numeric>

#include "detail.hpp"
#include "radclust/clustering/algorithms.hpp"

namespace radclust::clustering {

namespace {

/// RMS distance of the rows from their mean; 1 for a degenerate cloud.
double data_spread(const numerics::Matrix& x) {
    std::vector<double> mean(x.cols(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t c = 0; c < x.cols(); ++c) {
            mean[c] += x(i, c);
        }
    }
    for (double& m : mean) {
        m /= static_cast<double>(x.rows());
    }
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        total += numerics::squared_distance(x.row(i), mean);
    }
    const double spread = std::sqrt(total / static_cast<double>(x.rows()));
    return spread > 0.0 ? spread : 1.0;
}

} // namespace

ClusterResult minibatch_kmeans(const FeatureMatrix& features, const ClusterConfig& cfg) {
    const auto& x = features.values();
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    cfg.validate(n);

    auto rng = numerics::make_rng(cfg.seed);
    numerics::Matrix centers = initial_centroids(x, cfg.k, cfg.init, rng);
    std::vector<std::size_t> counts(cfg.k, 0);

    const std::size_t batch = std::min(cfg.batch_size, n);
    const std::size_t pass_len = (n + batch - 1) / batch;
    const double move_tol = cfg.tol * data_spread(x);

    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::vector<std::size_t> assign(batch);
    numerics::Matrix pass_start = centers;

    ClusterResult result;
    for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
        // Partial Fisher-Yates: the first `batch` slots become the sample.
        for (std::size_t s = 0; s < batch; ++s) {
            const std::size_t j = s + rng.next_below(n - s);
            std::swap(pool[s], pool[j]);
        }
        double inertia = 0.0;
        for (std::size_t s = 0; s < batch; ++s) {
            const auto [j, dist] = detail::nearest(x.row(pool[s]), centers);
            assign[s] = j;
            inertia += dist;
        }
        for (std::size_t s = 0; s < batch; ++s) {
            const std::size_t j = assign[s];
            ++counts[j];
            const double eta = 1.0 / static_cast<double>(counts[j]);
            auto c = centers.row(j);
            const auto xi = x.row(pool[s]);
            for (std::size_t f = 0; f < d; ++f) {
                c[f] += eta * (xi[f] - c[f]);
            }
        }
        result.objective_trace.push_back(inertia / static_cast<double>(batch));
        result.iterations = it;

        if (it % pass_len == 0) {
            double movement = 0.0;
            for (std::size_t j = 0; j < cfg.k; ++j) {
                movement = std::max(movement,
                                    std::sqrt(numerics::squared_distance(centers.row(j), pass_start.row(j))));
            }
            if (movement <= move_tol) {
                result.converged = true;
                break;
            }
            pass_start = centers;
        }
    }

    result.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.labels[i] = static_cast<int>(detail::nearest(x.row(i), centers).first);
    }
    result.centroids = std::move(centers);
    return result;
}

} // namespace radclust::clustering
