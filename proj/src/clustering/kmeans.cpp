#include <algorithm>
#include <limits>
#include <string>

#include "detail.hpp"
#include "radclust/clustering/algorithms.hpp"
#include "radclust/error.hpp"

namespace radclust::clustering {

void ClusterConfig::validate(std::size_t n) const {
    if (k < 1) {
        throw ConfigError("cluster count k must be at least 1");
    }
    if (k > n) {
        throw ConfigError("cluster count k = " + std::to_string(k) + " exceeds sample count n = " +
                          std::to_string(n));
    }
    if (max_iters < 1) {
        throw ConfigError("max_iters must be at least 1");
    }
    if (!(tol > 0.0)) {
        throw ConfigError("tol must be positive");
    }
    if (n_init < 1) {
        throw ConfigError("n_init must be at least 1");
    }
    if (batch_size < 1) {
        throw ConfigError("batch_size must be at least 1");
    }
    if (rbf_sigma && !(*rbf_sigma > 0.0)) {
        throw ConfigError("rbf_sigma must be positive");
    }
    if (birch_threshold && !(*birch_threshold > 0.0)) {
        throw ConfigError("birch_threshold must be positive");
    }
    if (birch_branching < 2) {
        throw ConfigError("birch_branching must be at least 2");
    }
    if (!(covariance_reg > 0.0)) {
        throw ConfigError("covariance_reg must be positive");
    }
}

numerics::Matrix initial_centroids(const numerics::Matrix& x, std::size_t k, InitMethod method,
                                   numerics::RngStream& rng) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    numerics::Matrix c(k, d);
    if (method == InitMethod::FirstK) {
        for (std::size_t j = 0; j < k; ++j) {
            std::copy(x.row(j).begin(), x.row(j).end(), c.row(j).begin());
        }
        return c;
    }

    // k-means++: first center uniform, the rest proportional to D^2.
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    std::size_t pick = rng.next_below(n);
    for (std::size_t j = 0; j < k; ++j) {
        std::copy(x.row(pick).begin(), x.row(pick).end(), c.row(j).begin());
        if (j + 1 == k) {
            break;
        }
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], numerics::squared_distance(x.row(i), c.row(j)));
            total += d2[i];
        }
        if (total <= 0.0) {
            pick = rng.next_below(n);
            continue;
        }
        const double target = rng.next_uniform() * total;
        double acc = 0.0;
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc > target && d2[i] > 0.0) {
                pick = i;
                break;
            }
        }
    }
    return c;
}

namespace {

/// Moves the farthest point of a multi-member cluster into each empty
/// cluster, lowest empty index first.
void repair_empty(Labels& labels, std::vector<double>& dist, std::vector<std::size_t>& sizes) {
    for (std::size_t e = 0; e < sizes.size(); ++e) {
        if (sizes[e] != 0) {
            continue;
        }
        std::size_t far = labels.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (sizes[static_cast<std::size_t>(labels[i])] > 1 && dist[i] > far_d) {
                far_d = dist[i];
                far = i;
            }
        }
        if (far == labels.size()) {
            return; // k > distinct assignable points; nothing left to move
        }
        --sizes[static_cast<std::size_t>(labels[far])];
        labels[far] = static_cast<int>(e);
        dist[far] = 0.0;
        sizes[e] = 1;
    }
}

void update_means(const numerics::Matrix& x, const Labels& labels, numerics::Matrix& centroids) {
    const std::size_t k = centroids.rows();
    std::vector<std::size_t> counts(k, 0);
    numerics::Matrix sums(k, x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto j = static_cast<std::size_t>(labels[i]);
        ++counts[j];
        auto s = sums.row(j);
        const auto xi = x.row(i);
        for (std::size_t c = 0; c < x.cols(); ++c) {
            s[c] += xi[c];
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) {
            continue; // keep the previous position
        }
        for (std::size_t c = 0; c < x.cols(); ++c) {
            centroids(j, c) = sums(j, c) / static_cast<double>(counts[j]);
        }
    }
}

double sum_squared_error(const numerics::Matrix& x, const Labels& labels,
                         const numerics::Matrix& centroids) {
    double sse = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        sse += numerics::squared_distance(x.row(i), centroids.row(static_cast<std::size_t>(labels[i])));
    }
    return sse;
}

} // namespace

ClusterResult kmeans_from(const numerics::Matrix& x, numerics::Matrix init, const ClusterConfig& cfg) {
    const std::size_t n = x.rows();
    const std::size_t k = init.rows();
    ClusterResult result;
    result.labels.assign(n, -1);
    numerics::Matrix centroids = std::move(init);
    Labels labels(n);
    std::vector<double> dist(n);

    for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto [j, d] = detail::nearest(x.row(i), centroids);
            labels[i] = static_cast<int>(j);
            dist[i] = d;
            ++sizes[j];
        }
        repair_empty(labels, dist, sizes);
        const bool changed = labels != result.labels;
        result.labels = labels;
        update_means(x, labels, centroids);
        const double sse = sum_squared_error(x, labels, centroids);
        result.iterations = it;

        const bool stalled = !result.objective_trace.empty() &&
                             result.objective_trace.back() - sse <= cfg.tol * result.objective_trace.back();
        result.objective_trace.push_back(sse);
        if (!changed || stalled) {
            result.converged = true;
            break;
        }
    }
    result.centroids = std::move(centroids);
    return result;
}

ClusterResult kmeans(const numerics::Matrix& x, const ClusterConfig& cfg) {
    cfg.validate(x.rows());
    auto rng = numerics::make_rng(cfg.seed);
    const std::size_t restarts = cfg.init == InitMethod::FirstK ? 1 : cfg.n_init;
    ClusterResult best;
    for (std::size_t r = 0; r < restarts; ++r) {
        auto init = initial_centroids(x, cfg.k, cfg.init, rng);
        ClusterResult run = kmeans_from(x, std::move(init), cfg);
        if (r == 0 || run.objective_trace.back() < best.objective_trace.back()) {
            best = std::move(run);
        }
    }
    return best;
}

ClusterResult kmeans(const FeatureMatrix& x, const ClusterConfig& cfg) {
    return kmeans(x.values(), cfg);
}

} // namespace radclust::clustering
