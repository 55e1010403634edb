#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <string>
#include <thread>

#include "radclust/error.hpp"
#include "radclust/metrics/metrics.hpp"
#include "radclust/numerics/rng.hpp"
#include "radclust/pipeline/sweep.hpp"

namespace radclust::pipeline {

std::uint64_t cell_seed(std::uint64_t sweep_seed, Algorithm a, std::size_t k) {
    const auto cell = static_cast<std::uint64_t>(a) * 0x10000u + k;
    return numerics::mix64(sweep_seed ^ numerics::mix64(cell));
}

namespace {

SweepRow run_cell(const clustering::FeatureMatrix& x, const SweepConfig& cfg, Algorithm a, std::size_t k) {
    SweepRow row{a, k, std::nullopt, std::nullopt, false, {}};
    clustering::ClusterConfig cc = cfg.base;
    cc.k = k;
    cc.seed = cell_seed(cfg.seed, a, k);
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto result = run_algorithm(a, x, cc);
        row.silhouette = metrics::silhouette(x, result.labels).mean;
        row.converged = result.converged;
    } catch (const Error& e) {
        row.silhouette.reset();
        row.converged = false;
        row.error = e.what();
    }
    if (cfg.timing) {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        row.runtime_ms = std::chrono::duration<double, std::milli>(elapsed).count();
    }
    return row;
}

} // namespace

SweepReport sweep(const clustering::FeatureMatrix& x, const SweepConfig& cfg) {
    if (cfg.algorithms.empty()) {
        throw ConfigError("sweep needs at least one algorithm");
    }
    if (cfg.k_min < 2) {
        throw ConfigError("sweep k must be at least 2 (silhouette needs two clusters)");
    }
    if (cfg.k_min > cfg.k_max) {
        throw ConfigError("empty k range " + std::to_string(cfg.k_min) + ".." + std::to_string(cfg.k_max));
    }
    if (cfg.k_max > x.n()) {
        throw ConfigError("k = " + std::to_string(cfg.k_max) + " exceeds sample count " + std::to_string(x.n()));
    }

    struct Cell {
        Algorithm a;
        std::size_t k;
    };
    std::vector<Cell> cells;
    for (Algorithm a : cfg.algorithms) {
        for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) {
            cells.push_back({a, k});
        }
    }

    SweepReport report;
    report.rows.resize(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr fatal;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                report.rows[i] = run_cell(x, cfg, cells[i].a, cells[i].k);
            } catch (...) {
                // Not a library error (e.g. allocation failure): stop the sweep.
                if (!failed.exchange(true)) {
                    fatal = std::current_exception();
                }
            }
        }
    };
    std::size_t threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    threads = std::min(threads, cells.size());
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(work);
        }
    }
    if (fatal) {
        std::rethrow_exception(fatal);
    }
    return report;
}

} // namespace radclust::pipeline
