#include <algorithm>
#include <string>

#include "radclust/error.hpp"
#include "radclust/pipeline/algorithms.hpp"

namespace radclust::pipeline {

namespace {

struct Names {
    std::string_view cli;
    std::string_view display;
};

constexpr std::array<Names, 9> kNames{{
    {"kmeans", "K-Means"},
    {"minibatch", "Mini batch K-means"},
    {"spectral", "Spectral clustering"},
    {"ward", "Agglomerative Ward clustering"},
    {"average", "Agglomerative average clustering"},
    {"birch", "Birch clustering"},
    {"gmm-tied", "Gaussian mixture (Tied)"},
    {"gmm-diag", "Gaussian mixture (Diag)"},
    {"gmm-full", "Gaussian mixture (Full)"},
}};

std::string valid_names() {
    std::string s;
    for (const auto& n : kNames) {
        if (!s.empty()) {
            s += ", ";
        }
        s += n.cli;
    }
    return s;
}

} // namespace

std::string_view cli_name(Algorithm a) { return kNames[static_cast<std::size_t>(a)].cli; }

std::string_view display_name(Algorithm a) { return kNames[static_cast<std::size_t>(a)].display; }

Algorithm parse_algorithm(std::string_view name) {
    for (Algorithm a : kAllAlgorithms) {
        if (cli_name(a) == name) {
            return a;
        }
    }
    throw ConfigError("unknown algorithm '" + std::string(name) + "'; valid names: " + valid_names());
}

std::vector<Algorithm> parse_algorithm_list(std::string_view list) {
    if (list == "all") {
        return {kAllAlgorithms.begin(), kAllAlgorithms.end()};
    }
    std::vector<Algorithm> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const std::size_t comma = std::min(list.find(',', start), list.size());
        const std::string_view token = list.substr(start, comma - start);
        if (token.empty()) {
            throw ConfigError("empty entry in algorithm list '" + std::string(list) + "'");
        }
        out.push_back(parse_algorithm(token));
        start = comma + 1;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

clustering::ClusterResult run_algorithm(Algorithm a, const clustering::FeatureMatrix& x,
                                        const clustering::ClusterConfig& cfg) {
    using clustering::CovarianceMode;
    using clustering::Linkage;
    switch (a) {
    case Algorithm::KMeans:
        return clustering::kmeans(x, cfg);
    case Algorithm::MiniBatch:
        return clustering::minibatch_kmeans(x, cfg);
    case Algorithm::Spectral:
        return clustering::spectral(x, cfg);
    case Algorithm::Ward:
        return clustering::agglomerative(x, cfg, Linkage::Ward);
    case Algorithm::Average:
        return clustering::agglomerative(x, cfg, Linkage::Average);
    case Algorithm::Birch:
        return clustering::birch(x, cfg);
    case Algorithm::GmmTied:
        return clustering::gmm(x, cfg, CovarianceMode::Tied);
    case Algorithm::GmmDiag:
        return clustering::gmm(x, cfg, CovarianceMode::Diag);
    case Algorithm::GmmFull:
        return clustering::gmm(x, cfg, CovarianceMode::Full);
    }
    throw ConfigError("unknown algorithm");
}

} // namespace radclust::pipeline
