#include <cmath>
#include <limits>
#include <numeric>

#include "radclust/clustering/algorithms.hpp"

namespace radclust::clustering {

Dendrogram build_dendrogram(const numerics::Matrix& x, Linkage linkage) {
    const std::size_t n = x.rows();
    // Full matrix of current inter-cluster dissimilarities, indexed by slot.
    // A merged cluster keeps the lower slot, which is also its lowest row.
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d2 = numerics::squared_distance(x.row(i), x.row(j));
            const double v = linkage == Linkage::Ward ? 0.5 * d2 : std::sqrt(d2);
            dist[i * n + j] = v;
            dist[j * n + i] = v;
        }
    }
    std::vector<bool> active(n, true);
    std::vector<std::size_t> size(n, 1);
    std::vector<std::size_t> node_id(n);
    std::iota(node_id.begin(), node_id.end(), std::size_t{0});

    Dendrogram tree;
    tree.merges.reserve(n > 0 ? n - 1 : 0);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t bi = 0;
        std::size_t bj = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) {
                continue;
            }
            const double* row = dist.data() + i * n;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (active[j] && row[j] < best) {
                    best = row[j];
                    bi = i;
                    bj = j;
                }
            }
        }

        const double ni = static_cast<double>(size[bi]);
        const double nj = static_cast<double>(size[bj]);
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) {
                continue;
            }
            const double dki = dist[k * n + bi];
            const double dkj = dist[k * n + bj];
            double merged;
            if (linkage == Linkage::Average) {
                merged = (ni * dki + nj * dkj) / (ni + nj);
            } else {
                const double nk = static_cast<double>(size[k]);
                merged = ((ni + nk) * dki + (nj + nk) * dkj - nk * best) / (ni + nj + nk);
            }
            dist[k * n + bi] = merged;
            dist[bi * n + k] = merged;
        }

        tree.merges.push_back(Merge{node_id[bi], node_id[bj], best, size[bi] + size[bj]});
        size[bi] += size[bj];
        node_id[bi] = n + step;
        active[bj] = false;
    }
    return tree;
}

Labels cut_dendrogram(const Dendrogram& tree, std::size_t n, std::size_t k) {
    // Union-find over the point ids and the merge ids.
    std::vector<std::size_t> parent(n + tree.merges.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    const std::size_t applied = n - k;
    for (std::size_t t = 0; t < applied && t < tree.merges.size(); ++t) {
        const std::size_t merged = n + t;
        parent[find(tree.merges[t].cluster_a)] = merged;
        parent[find(tree.merges[t].cluster_b)] = merged;
    }
    Labels labels(n, -1);
    std::vector<int> label_of_root(parent.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (label_of_root[root] < 0) {
            label_of_root[root] = next++;
        }
        labels[i] = label_of_root[root];
    }
    return labels;
}

ClusterResult agglomerative(const FeatureMatrix& x, const ClusterConfig& cfg, Linkage linkage) {
    cfg.validate(x.n());
    ClusterResult result;
    Dendrogram tree = build_dendrogram(x.values(), linkage);
    result.labels = cut_dendrogram(tree, x.n(), cfg.k);
    for (std::size_t t = 0; t < x.n() - cfg.k; ++t) {
        result.objective_trace.push_back(tree.merges[t].height);
    }
    result.iterations = x.n() - cfg.k;
    result.converged = true;
    result.model = std::move(tree);
    return result;
}

} // namespace radclust::clustering
