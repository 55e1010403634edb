#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "radclust/clustering/feature_matrix.hpp"
#include "radclust/clustering/types.hpp"
#include "radclust/pipeline/algorithms.hpp"

namespace radclust::pipeline {

struct SweepConfig {
    std::vector<Algorithm> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
    std::size_t k_min = 2;
    std::size_t k_max = 6;
    std::uint64_t seed = 0;
    /// Knobs shared by every cell; k and seed are overwritten per cell.
    clustering::ClusterConfig base;
    /// 0 uses the hardware concurrency. Results do not depend on it.
    std::size_t threads = 0;
    /// Measure wall time per cell. Off by default so reports are reproducible.
    bool timing = false;
};

struct SweepRow {
    Algorithm algorithm;
    std::size_t k;
    std::optional<double> silhouette; ///< empty when the run failed
    std::optional<double> runtime_ms;
    bool converged = false;
    std::string error;
};

struct SweepReport {
    std::vector<SweepRow> rows;
};

/// Seed of the (algorithm, k) cell, independent of execution order.
std::uint64_t cell_seed(std::uint64_t sweep_seed, Algorithm a, std::size_t k);

/// Rows in algorithm order, then k ascending. Throws ConfigError for an
/// empty algorithm list, k_min < 2, k_min > k_max or k_max > n.
SweepReport sweep(const clustering::FeatureMatrix& x, const SweepConfig& cfg);

/// Header `algorithm,k,silhouette,runtime_ms,converged`.
std::string render_report_csv(const SweepReport& report);

/// Standalone SVG line chart: k on x, silhouette on y in [0, 1], one
/// series per algorithm with a legend. Failed cells break the line.
std::string render_chart_svg(const SweepReport& report);

} // namespace radclust::pipeline
