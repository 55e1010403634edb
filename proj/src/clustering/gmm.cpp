#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "radclust/clustering/algorithms.hpp"
#include "radclust/error.hpp"

namespace radclust::clustering {

namespace {

constexpr double kMaxReg = 1e-2;

/// Precomputed per-component density terms: Cholesky factor (or diagonal
/// variances) and log-determinant.
struct Component {
    numerics::Matrix chol; // lower factor; unused in Diag mode
    std::vector<double> var;
    double log_det = 0.0;
};

Component factor(const numerics::Matrix& cov, CovarianceMode mode) {
    const std::size_t d = cov.rows();
    Component c;
    if (mode == CovarianceMode::Diag) {
        c.var.resize(d);
        for (std::size_t f = 0; f < d; ++f) {
            if (!(cov(f, f) > 0.0)) {
                throw numerics::NotPositiveDefinite(f);
            }
            c.var[f] = cov(f, f);
            c.log_det += std::log(cov(f, f));
        }
        return c;
    }
    c.chol = numerics::cholesky(numerics::SymMatrix(cov));
    for (std::size_t f = 0; f < d; ++f) {
        c.log_det += 2.0 * std::log(c.chol(f, f));
    }
    return c;
}

double log_density(std::span<const double> x, std::span<const double> mean, const Component& c,
                   CovarianceMode mode, std::vector<double>& z) {
    const std::size_t d = x.size();
    double maha = 0.0;
    if (mode == CovarianceMode::Diag) {
        for (std::size_t f = 0; f < d; ++f) {
            const double diff = x[f] - mean[f];
            maha += diff * diff / c.var[f];
        }
    } else {
        // Forward substitution L z = x - mean.
        for (std::size_t r = 0; r < d; ++r) {
            double s = x[r] - mean[r];
            for (std::size_t q = 0; q < r; ++q) {
                s -= c.chol(r, q) * z[q];
            }
            z[r] = s / c.chol(r, r);
            maha += z[r] * z[r];
        }
    }
    return -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + c.log_det + maha);
}

/// Adds reg to the diagonal and factors, escalating reg tenfold while the
/// factorization fails.
Component regularize(numerics::Matrix& cov, double& reg, CovarianceMode mode, std::size_t component) {
    const numerics::Matrix raw = cov;
    for (;;) {
        cov = raw;
        for (std::size_t f = 0; f < cov.rows(); ++f) {
            cov(f, f) += reg;
        }
        try {
            return factor(cov, mode);
        } catch (const numerics::NotPositiveDefinite&) {
            if (reg * 10.0 > kMaxReg * (1.0 + 1e-12)) {
                throw NumericError("degenerate component " + std::to_string(component) +
                                   ": covariance not positive definite at regularization " +
                                   std::to_string(reg));
            }
            reg *= 10.0;
        }
    }
}

void restrict_to_mode(numerics::Matrix& cov, CovarianceMode mode) {
    if (mode != CovarianceMode::Diag) {
        return;
    }
    for (std::size_t r = 0; r < cov.rows(); ++r) {
        for (std::size_t c = 0; c < cov.cols(); ++c) {
            if (r != c) {
                cov(r, c) = 0.0;
            }
        }
    }
}

/// Adds w * (x - mean)(x - mean)^T into acc (lower and upper halves).
void add_scatter(numerics::Matrix& acc, std::span<const double> x, std::span<const double> mean, double w,
                 std::vector<double>& diff) {
    const std::size_t d = x.size();
    for (std::size_t f = 0; f < d; ++f) {
        diff[f] = x[f] - mean[f];
    }
    for (std::size_t r = 0; r < d; ++r) {
        const double wr = w * diff[r];
        for (std::size_t c = 0; c <= r; ++c) {
            acc(r, c) += wr * diff[c];
        }
    }
}

void mirror_lower(numerics::Matrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < r; ++c) {
            m(c, r) = m(r, c);
        }
    }
}

class Em {
public:
    Em(const numerics::Matrix& x, std::size_t k, CovarianceMode mode, double reg)
        : x_(x), k_(k), mode_(mode), base_reg_(reg), comps_(k), z_(x.cols()), diff_(x.cols()) {
        model_.mode = mode;
        model_.regularization.assign(k, reg);
        model_.responsibilities = numerics::Matrix(x.rows(), k);
    }

    void init(numerics::Matrix means) {
        const std::size_t n = x_.rows();
        const std::size_t d = x_.cols();
        model_.means = std::move(means);
        model_.weights.assign(k_, 1.0 / static_cast<double>(k_));

        std::vector<double> mu(d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t f = 0; f < d; ++f) {
                mu[f] += x_(i, f);
            }
        }
        for (double& v : mu) {
            v /= static_cast<double>(n);
        }
        numerics::Matrix global(d, d);
        for (std::size_t i = 0; i < n; ++i) {
            add_scatter(global, x_.row(i), mu, 1.0 / static_cast<double>(n), diff_);
        }
        mirror_lower(global);
        restrict_to_mode(global, mode_);
        model_.covariances.assign(k_, global);
        finish_covariances();
    }

    /// Responsibilities for the current parameters; returns the mean
    /// log-likelihood.
    double e_step() {
        const std::size_t n = x_.rows();
        std::vector<double> log_w(k_);
        for (std::size_t j = 0; j < k_; ++j) {
            log_w[j] = std::log(model_.weights[j]);
        }
        std::vector<double> lp(k_);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < k_; ++j) {
                lp[j] = log_w[j] + log_density(x_.row(i), model_.means.row(j), comps_[j], mode_, z_);
                top = std::max(top, lp[j]);
            }
            double sum = 0.0;
            for (std::size_t j = 0; j < k_; ++j) {
                sum += std::exp(lp[j] - top);
            }
            const double lse = top + std::log(sum);
            total += lse;
            auto r = model_.responsibilities.row(i);
            for (std::size_t j = 0; j < k_; ++j) {
                r[j] = std::exp(lp[j] - lse);
            }
        }
        return total / static_cast<double>(n);
    }

    void m_step() {
        const std::size_t n = x_.rows();
        const std::size_t d = x_.cols();
        const auto& resp = model_.responsibilities;
        // Same floor as common reference implementations: keeps an emptied
        // component's mean finite.
        const double floor = 10.0 * std::numeric_limits<double>::epsilon();

        std::vector<double> nk(k_, floor);
        numerics::Matrix means(k_, d);
        for (std::size_t i = 0; i < n; ++i) {
            const auto xi = x_.row(i);
            for (std::size_t j = 0; j < k_; ++j) {
                const double r = resp(i, j);
                nk[j] += r;
                auto m = means.row(j);
                for (std::size_t f = 0; f < d; ++f) {
                    m[f] += r * xi[f];
                }
            }
        }
        double nk_total = 0.0;
        for (std::size_t j = 0; j < k_; ++j) {
            nk_total += nk[j];
            for (std::size_t f = 0; f < d; ++f) {
                means(j, f) /= nk[j];
            }
        }
        for (std::size_t j = 0; j < k_; ++j) {
            model_.weights[j] = nk[j] / nk_total;
        }
        model_.means = std::move(means);

        if (mode_ == CovarianceMode::Tied) {
            numerics::Matrix pooled(d, d);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < k_; ++j) {
                    add_scatter(pooled, x_.row(i), model_.means.row(j), resp(i, j), diff_);
                }
            }
            for (double& v : pooled.data()) {
                v /= static_cast<double>(n);
            }
            mirror_lower(pooled);
            model_.covariances.assign(k_, pooled);
        } else {
            for (std::size_t j = 0; j < k_; ++j) {
                numerics::Matrix cov(d, d);
                for (std::size_t i = 0; i < n; ++i) {
                    add_scatter(cov, x_.row(i), model_.means.row(j), resp(i, j) / nk[j], diff_);
                }
                mirror_lower(cov);
                restrict_to_mode(cov, mode_);
                model_.covariances[j] = std::move(cov);
            }
        }
        finish_covariances();
    }

    GmmModel& model() { return model_; }

private:
    void finish_covariances() {
        if (mode_ == CovarianceMode::Tied) {
            double reg = base_reg_;
            numerics::Matrix shared = model_.covariances[0];
            const Component c = regularize(shared, reg, mode_, 0);
            for (std::size_t j = 0; j < k_; ++j) {
                model_.covariances[j] = shared;
                model_.regularization[j] = reg;
                comps_[j] = c;
            }
            return;
        }
        for (std::size_t j = 0; j < k_; ++j) {
            double reg = base_reg_;
            comps_[j] = regularize(model_.covariances[j], reg, mode_, j);
            model_.regularization[j] = reg;
        }
    }

    const numerics::Matrix& x_;
    std::size_t k_;
    CovarianceMode mode_;
    double base_reg_;
    GmmModel model_;
    std::vector<Component> comps_;
    std::vector<double> z_;
    std::vector<double> diff_;
};

} // namespace

ClusterResult gmm(const FeatureMatrix& features, const ClusterConfig& cfg, CovarianceMode mode) {
    const auto& x = features.values();
    cfg.validate(x.rows());

    ClusterResult init = kmeans(x, cfg);
    Em em(x, cfg.k, mode, cfg.covariance_reg);
    em.init(std::move(*init.centroids));

    ClusterResult result;
    double ll = em.e_step();
    result.objective_trace.push_back(ll);
    for (std::size_t it = 1; it <= cfg.max_iters; ++it) {
        em.m_step();
        const double next = em.e_step();
        result.objective_trace.push_back(next);
        result.iterations = it;
        const bool done = next - ll <= cfg.tol;
        ll = next;
        if (done) {
            result.converged = true;
            break;
        }
    }

    GmmModel& model = em.model();
    const auto& resp = model.responsibilities;
    result.labels.resize(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < cfg.k; ++j) {
            if (resp(i, j) > resp(i, best)) {
                best = j;
            }
        }
        result.labels[i] = static_cast<int>(best);
    }
    result.centroids = model.means;
    result.model = std::move(model);
    return result;
}

} // namespace radclust::clustering
