#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>

#include "radclust/clustering/algorithms.hpp"
#include "radclust/error.hpp"

namespace radclust::clustering {

CfEntry CfEntry::from_point(std::span<const double> x) {
    CfEntry e;
    e.n = 1;
    e.ls.assign(x.begin(), x.end());
    for (double v : x) {
        e.ss += v * v;
    }
    return e;
}

CfEntry& CfEntry::operator+=(const CfEntry& other) {
    if (ls.empty()) {
        ls.assign(other.ls.size(), 0.0);
    }
    n += other.n;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        ls[i] += other.ls[i];
    }
    ss += other.ss;
    return *this;
}

std::vector<double> CfEntry::centroid() const {
    std::vector<double> c(ls.size());
    for (std::size_t i = 0; i < ls.size(); ++i) {
        c[i] = ls[i] / static_cast<double>(n);
    }
    return c;
}

double CfEntry::radius() const {
    const double inv = 1.0 / static_cast<double>(n);
    double centroid_sq = 0.0;
    for (double v : ls) {
        centroid_sq += (v * inv) * (v * inv);
    }
    return std::sqrt(std::max(0.0, ss * inv - centroid_sq));
}

namespace {

struct Node {
    bool leaf = true;
    std::vector<CfEntry> entries;
    std::vector<std::vector<double>> centroids; // cached entries[i].centroid()
    std::vector<std::unique_ptr<Node>> children; // internal nodes only
    std::vector<std::vector<std::size_t>> members; // leaf nodes only: row indices

    void refresh(std::size_t i) { centroids[i] = entries[i].centroid(); }

    std::size_t closest(std::span<const double> x) const {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const double d = numerics::squared_distance(x, centroids[i]);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        return best;
    }
};

CfEntry summarize(const Node& node) {
    CfEntry total;
    for (const auto& e : node.entries) {
        total += e;
    }
    return total;
}

class CfTree {
public:
    CfTree(double threshold, std::size_t branching)
        : threshold_(threshold), branching_(branching), root_(std::make_unique<Node>()) {}

    void insert(std::span<const double> x, std::size_t row) {
        const CfEntry point = CfEntry::from_point(x);
        auto split = insert_into(*root_, point, x, row);
        if (split) {
            auto new_root = std::make_unique<Node>();
            new_root->leaf = false;
            for (auto& half : *split) {
                new_root->entries.push_back(summarize(*half));
                new_root->centroids.push_back(new_root->entries.back().centroid());
                new_root->children.push_back(std::move(half));
            }
            root_ = std::move(new_root);
        }
    }

    /// Leaf entries and their member rows, left to right.
    void collect(std::vector<CfEntry>& entries, std::vector<std::vector<std::size_t>>& members,
                 std::size_t& nodes) const {
        walk(*root_, entries, members, nodes);
    }

private:
    using Split = std::optional<std::array<std::unique_ptr<Node>, 2>>;

    Split insert_into(Node& node, const CfEntry& point, std::span<const double> x, std::size_t row) {
        if (node.leaf) {
            if (!node.entries.empty()) {
                const std::size_t i = node.closest(x);
                CfEntry trial = node.entries[i];
                trial += point;
                if (trial.radius() <= threshold_) {
                    node.entries[i] = std::move(trial);
                    node.refresh(i);
                    node.members[i].push_back(row);
                    return std::nullopt;
                }
            }
            node.entries.push_back(point);
            node.centroids.emplace_back(x.begin(), x.end());
            node.members.push_back({row});
        } else {
            const std::size_t i = node.closest(x);
            auto child_split = insert_into(*node.children[i], point, x, row);
            if (child_split) {
                auto& [left, right] = *child_split;
                node.entries[i] = summarize(*left);
                node.refresh(i);
                node.children[i] = std::move(left);
                node.entries.insert(node.entries.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                    summarize(*right));
                node.centroids.insert(node.centroids.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                      node.entries[i + 1].centroid());
                node.children.insert(node.children.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                     std::move(right));
            } else {
                node.entries[i] += point;
                node.refresh(i);
            }
        }
        if (node.entries.size() > branching_) {
            return split(node);
        }
        return std::nullopt;
    }

    /// Farthest pair of entries seeds two nodes; the rest go to the closer
    /// seed (first seed on ties).
    static std::array<std::unique_ptr<Node>, 2> split(Node& node) {
        const std::size_t m = node.entries.size();
        std::size_t sa = 0;
        std::size_t sb = 1;
        double far = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                const double d = numerics::squared_distance(node.centroids[i], node.centroids[j]);
                if (d > far) {
                    far = d;
                    sa = i;
                    sb = j;
                }
            }
        }
        const std::vector<double> seed_a = node.centroids[sa];
        const std::vector<double> seed_b = node.centroids[sb];
        std::array<std::unique_ptr<Node>, 2> halves{std::make_unique<Node>(), std::make_unique<Node>()};
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t side;
            if (i == sa) {
                side = 0;
            } else if (i == sb) {
                side = 1;
            } else {
                const double da = numerics::squared_distance(node.centroids[i], seed_a);
                const double db = numerics::squared_distance(node.centroids[i], seed_b);
                side = db < da ? 1 : 0;
            }
            Node& dst = *halves[side];
            dst.leaf = node.leaf;
            dst.entries.push_back(std::move(node.entries[i]));
            dst.centroids.push_back(std::move(node.centroids[i]));
            if (node.leaf) {
                dst.members.push_back(std::move(node.members[i]));
            } else {
                dst.children.push_back(std::move(node.children[i]));
            }
        }
        return halves;
    }

    static void walk(const Node& node, std::vector<CfEntry>& entries,
                     std::vector<std::vector<std::size_t>>& members, std::size_t& nodes) {
        ++nodes;
        if (node.leaf) {
            entries.insert(entries.end(), node.entries.begin(), node.entries.end());
            members.insert(members.end(), node.members.begin(), node.members.end());
            return;
        }
        for (const auto& child : node.children) {
            walk(*child, entries, members, nodes);
        }
    }

    double threshold_;
    std::size_t branching_;
    std::unique_ptr<Node> root_;
};

} // namespace

double default_birch_threshold(const numerics::Matrix& x, std::uint64_t seed) {
    constexpr std::size_t kSample = 256;
    const std::size_t n = x.rows();
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    if (n > kSample) {
        auto rng = numerics::make_rng(seed);
        for (std::size_t s = 0; s < kSample; ++s) {
            std::swap(rows[s], rows[s + rng.next_below(n - s)]);
        }
        rows.resize(kSample);
        std::sort(rows.begin(), rows.end());
    }
    numerics::Matrix sample(rows.size(), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy(x.row(rows[i]).begin(), x.row(rows[i]).end(), sample.row(i).begin());
    }
    return 0.5 * median_offdiagonal(numerics::pairwise_distances(sample));
}

ClusterResult birch(const FeatureMatrix& x, const ClusterConfig& cfg) {
    cfg.validate(x.n());
    double threshold = cfg.birch_threshold.value_or(default_birch_threshold(x.values(), cfg.seed));
    if (!(threshold > 0.0)) {
        threshold = std::numeric_limits<double>::min();
    }

    // Too coarse a threshold can leave fewer leaf entries than clusters;
    // halve it and rebuild until the global phase has k points to work with.
    constexpr int kMaxRebuilds = 60;
    CfTreeStats stats;
    std::vector<std::vector<std::size_t>> members;
    for (int attempt = 0;; ++attempt) {
        CfTree tree(threshold, cfg.birch_branching);
        for (std::size_t i = 0; i < x.n(); ++i) {
            tree.insert(x.row(i), i);
        }
        stats = CfTreeStats{};
        members.clear();
        tree.collect(stats.leaf_entries, members, stats.node_count);
        stats.leaf_entry_count = stats.leaf_entries.size();
        stats.threshold = threshold;
        if (stats.leaf_entry_count >= cfg.k) {
            break;
        }
        if (attempt == kMaxRebuilds) {
            throw NumericError("BIRCH produced " + std::to_string(stats.leaf_entry_count) +
                               " distinct leaf entries, fewer than k = " + std::to_string(cfg.k));
        }
        threshold *= 0.5;
    }

    numerics::Matrix centroids(stats.leaf_entry_count, x.d());
    for (std::size_t e = 0; e < stats.leaf_entry_count; ++e) {
        const auto c = stats.leaf_entries[e].centroid();
        std::copy(c.begin(), c.end(), centroids.row(e).begin());
    }
    ClusterResult global = kmeans(centroids, cfg);

    ClusterResult result;
    result.labels.assign(x.n(), -1);
    for (std::size_t e = 0; e < members.size(); ++e) {
        for (std::size_t row : members[e]) {
            result.labels[row] = global.labels[e];
        }
    }
    result.centroids = std::move(global.centroids);
    result.objective_trace = std::move(global.objective_trace);
    result.iterations = global.iterations;
    result.converged = global.converged;
    result.model = std::move(stats);
    return result;
}

} // namespace radclust::clustering
