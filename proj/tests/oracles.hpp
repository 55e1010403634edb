#pragma once

// Slow, obviously-correct reference implementations used to check the
// library. They share no code with it: plain nested vectors and loops.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

inline double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(s);
}

/// Mean silhouette straight from the definition.
inline double silhouette(const Rows& x, const std::vector<int>& labels, std::vector<double>* per_point = nullptr) {
    const std::size_t n = x.size();
    std::set<int> names(labels.begin(), labels.end());
    double total = 0.0;
    if (per_point) {
        per_point->assign(n, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        double own_sum = 0.0;
        int own_count = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i && labels[j] == labels[i]) {
                own_sum += dist(x[i], x[j]);
                ++own_count;
            }
        }
        if (own_count == 0) {
            continue; // singleton: 0
        }
        const double a = own_sum / own_count;
        double b = std::numeric_limits<double>::infinity();
        for (int other : names) {
            if (other == labels[i]) {
                continue;
            }
            double s = 0.0;
            int c = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (labels[j] == other) {
                    s += dist(x[i], x[j]);
                    ++c;
                }
            }
            b = std::min(b, s / c);
        }
        const double m = std::max(a, b);
        const double si = m > 0.0 ? (b - a) / m : 0.0;
        if (per_point) {
            (*per_point)[i] = si;
        }
        total += si;
    }
    return total / static_cast<double>(n);
}

inline double sse_of_partition(const Rows& x, const std::vector<int>& labels, int k) {
    double total = 0.0;
    for (int c = 0; c < k; ++c) {
        std::vector<double> mean(x[0].size(), 0.0);
        int count = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (labels[i] == c) {
                for (std::size_t f = 0; f < mean.size(); ++f) {
                    mean[f] += x[i][f];
                }
                ++count;
            }
        }
        if (count == 0) {
            continue;
        }
        for (double& m : mean) {
            m /= count;
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (labels[i] == c) {
                const double d = dist(x[i], mean);
                total += d * d;
            }
        }
    }
    return total;
}

/// Global minimum SSE over every assignment of n points to 2 non-empty
/// clusters (all 2^n bit patterns).
inline double best_two_partition_sse(const Rows& x) {
    const std::size_t n = x.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<int> labels(n);
        int ones = 0;
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = (mask >> i) & 1u;
            ones += labels[i];
        }
        if (ones == 0 || ones == static_cast<int>(n)) {
            continue;
        }
        best = std::min(best, sse_of_partition(x, labels, 2));
    }
    return best;
}

/// Eigenvalues of a small symmetric matrix as the roots of its
/// characteristic polynomial: Faddeev-LeVerrier coefficients, then
/// bisection on sign changes over a fine grid inside the Gershgorin bound.
inline std::vector<double> charpoly_roots(const Rows& a) {
    const std::size_t n = a.size();
    // c[k] is the coefficient of lambda^(n-k); c[0] = 1.
    std::vector<double> c(n + 1, 0.0);
    c[0] = 1.0;
    Rows m(n, std::vector<double>(n, 0.0)); // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{k-1} I
        Rows next(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t t = 0; t < n; ++t) {
                    s += a[i][t] * m[t][j];
                }
                next[i][j] = s + (i == j ? c[k - 1] : 0.0);
            }
        }
        m = next;
        double tr = 0.0; // trace(A M_k)
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t t = 0; t < n; ++t) {
                tr += a[i][t] * m[t][i];
            }
        }
        c[k] = -tr / static_cast<double>(k);
    }
    auto p = [&](double lambda) {
        double v = 0.0;
        for (std::size_t k = 0; k <= n; ++k) {
            v = v * lambda + c[k];
        }
        return v;
    };
    double bound = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            r += std::abs(a[i][j]);
        }
        bound = std::max(bound, r);
    }
    bound += 1.0;
    std::vector<double> roots;
    const int steps = 200000;
    double lo = -bound;
    double plo = p(lo);
    for (int s = 1; s <= steps; ++s) {
        const double hi = -bound + 2.0 * bound * s / steps;
        const double phi = p(hi);
        if (plo == 0.0) {
            roots.push_back(lo);
        } else if ((plo < 0.0) != (phi < 0.0) && phi != 0.0) {
            double l = lo, h = hi, pl = plo;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (l + h);
                const double pm = p(mid);
                if ((pm < 0.0) == (pl < 0.0)) {
                    l = mid;
                    pl = pm;
                } else {
                    h = mid;
                }
            }
            roots.push_back(0.5 * (l + h));
        }
        lo = hi;
        plo = phi;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// Same-padding 3x3 cross-correlation, tensors indexed [c][y][x],
/// kernel [o][i][ky][kx].
using T3 = std::vector<std::vector<std::vector<double>>>;
using K4 = std::vector<std::vector<std::vector<std::vector<double>>>>;

inline T3 conv(const T3& in, const K4& k, const std::vector<double>& bias) {
    const int channels = static_cast<int>(in.size());
    const int h = static_cast<int>(in[0].size());
    const int w = static_cast<int>(in[0][0].size());
    T3 out(k.size(), std::vector<std::vector<double>>(h, std::vector<double>(w, 0.0)));
    for (std::size_t o = 0; o < k.size(); ++o) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double s = bias[o];
                for (int i = 0; i < channels; ++i) {
                    for (int ky = 0; ky < 3; ++ky) {
                        for (int kx = 0; kx < 3; ++kx) {
                            const int sy = y + ky - 1;
                            const int sx = x + kx - 1;
                            if (sy >= 0 && sy < h && sx >= 0 && sx < w) {
                                s += k[o][i][ky][kx] * in[i][sy][sx];
                            }
                        }
                    }
                }
                out[o][y][x] = s;
            }
        }
    }
    return out;
}

inline T3 maxpool(const T3& in) {
    T3 out(in.size());
    for (std::size_t c = 0; c < in.size(); ++c) {
        const std::size_t h = in[c].size() / 2;
        const std::size_t w = in[c][0].size() / 2;
        out[c].assign(h, std::vector<double>(w));
        for (std::size_t y = 0; y < h; ++y) {
            for (std::size_t x = 0; x < w; ++x) {
                double m = -std::numeric_limits<double>::infinity();
                for (std::size_t dy = 0; dy < 2; ++dy) {
                    for (std::size_t dx = 0; dx < 2; ++dx) {
                        m = std::max(m, in[c][2 * y + dy][2 * x + dx]);
                    }
                }
                out[c][y][x] = m;
            }
        }
    }
    return out;
}

inline std::vector<double> dense(const std::vector<double>& v, const Rows& w, const std::vector<double>& b) {
    std::vector<double> out(w.size());
    for (std::size_t o = 0; o < w.size(); ++o) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += w[o][i] * v[i];
        }
        out[o] = s + b[o];
    }
    return out;
}

/// Agglomerative clustering recomputing every candidate cost from the
/// member points. Returns the merge heights in order. Ward cost is the
/// increase in within-cluster SSE; average cost is the mean of all
/// cross-cluster point distances.
inline std::vector<double> agglomerative_heights(const Rows& x, bool ward) {
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < x.size(); ++i) {
        clusters.push_back({i});
    }
    auto sse = [&](const std::vector<std::size_t>& members) {
        std::vector<double> mean(x[0].size(), 0.0);
        for (auto m : members) {
            for (std::size_t f = 0; f < mean.size(); ++f) {
                mean[f] += x[m][f];
            }
        }
        for (double& v : mean) {
            v /= static_cast<double>(members.size());
        }
        double s = 0.0;
        for (auto m : members) {
            const double d = dist(x[m], mean);
            s += d * d;
        }
        return s;
    };
    auto cost = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        if (ward) {
            std::vector<std::size_t> u = a;
            u.insert(u.end(), b.begin(), b.end());
            return sse(u) - sse(a) - sse(b);
        }
        double s = 0.0;
        for (auto i : a) {
            for (auto j : b) {
                s += dist(x[i], x[j]);
            }
        }
        return s / static_cast<double>(a.size() * b.size());
    };
    std::vector<double> heights;
    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                const double c = cost(clusters[i], clusters[j]);
                if (c < best) {
                    best = c;
                    bi = i;
                    bj = j;
                }
            }
        }
        heights.push_back(best);
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return heights;
}

/// True when a and b induce the same partition (labels up to renaming).
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) {
        return false;
    }
    std::map<int, int> ab, ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto [it1, new1] = ab.emplace(a[i], b[i]);
        auto [it2, new2] = ba.emplace(b[i], a[i]);
        if (it1->second != b[i] || it2->second != a[i]) {
            return false;
        }
    }
    return true;
}

} // namespace oracle
