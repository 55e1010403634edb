#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "radclust/clustering/algorithms.hpp"

namespace radclust::pipeline {

/// The nine clustering variants, in report order.
enum class Algorithm {
    KMeans,
    MiniBatch,
    Spectral,
    Ward,
    Average,
    Birch,
    GmmTied,
    GmmDiag,
    GmmFull,
};

inline constexpr std::array<Algorithm, 9> kAllAlgorithms{
    Algorithm::KMeans,  Algorithm::MiniBatch, Algorithm::Spectral, Algorithm::Ward,    Algorithm::Average,
    Algorithm::Birch,   Algorithm::GmmTied,   Algorithm::GmmDiag,  Algorithm::GmmFull,
};

/// Command-line token, e.g. "minibatch".
std::string_view cli_name(Algorithm a);
/// Report label, e.g. "Mini batch K-means".
std::string_view display_name(Algorithm a);

/// Throws ConfigError listing the valid names.
Algorithm parse_algorithm(std::string_view name);
/// "all" or a comma-separated list; result sorted into report order with
/// duplicates removed.
std::vector<Algorithm> parse_algorithm_list(std::string_view list);

clustering::ClusterResult run_algorithm(Algorithm a, const clustering::FeatureMatrix& x,
                                        const clustering::ClusterConfig& cfg);

} // namespace radclust::pipeline
