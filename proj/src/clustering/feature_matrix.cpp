#include "radclust/clustering/feature_matrix.hpp"

#include <cmath>
#include <unordered_set>

#include "radclust/error.hpp"

namespace radclust::clustering {

namespace {

std::vector<std::string> default_ids(std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back("r" + std::to_string(i));
    }
    return ids;
}

} // namespace

FeatureMatrix::FeatureMatrix(numerics::Matrix values, std::vector<std::string> ids)
    : values_(std::move(values)), ids_(std::move(ids)) {
    if (values_.rows() == 0 || values_.cols() == 0) {
        throw ConfigError("feature matrix must be non-empty, got " + std::to_string(values_.rows()) +
                          "x" + std::to_string(values_.cols()));
    }
    if (ids_.size() != values_.rows()) {
        throw ConfigError("feature matrix has " + std::to_string(values_.rows()) + " rows but " +
                          std::to_string(ids_.size()) + " ids");
    }
    for (std::size_t i = 0; i < values_.rows(); ++i) {
        for (double v : values_.row(i)) {
            if (!std::isfinite(v)) {
                throw ConfigError("feature row " + ids_[i] + " has a non-finite value");
            }
        }
    }
    std::unordered_set<std::string> seen;
    for (const auto& id : ids_) {
        if (!seen.insert(id).second) {
            throw ConfigError("duplicate feature id " + id);
        }
    }
}

FeatureMatrix::FeatureMatrix(numerics::Matrix values)
    : FeatureMatrix(values, default_ids(values.rows())) {}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    const std::size_t d = n == 0 ? 0 : rows.front().size();
    numerics::Matrix m(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != d) {
            throw ShapeError("ragged feature rows");
        }
        for (std::size_t j = 0; j < d; ++j) {
            m(i, j) = rows[i][j];
        }
    }
    return FeatureMatrix(std::move(m));
}

} // namespace radclust::clustering
