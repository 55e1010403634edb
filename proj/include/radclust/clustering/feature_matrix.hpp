#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "radclust/numerics/linalg.hpp"

namespace radclust::clustering {

/// n x d embedding matrix with one identifier per row.
///
/// Invariants (checked on construction, ConfigError otherwise): n >= 1,
/// d >= 1, every value finite, ids unique and one per row.
class FeatureMatrix {
public:
    FeatureMatrix(numerics::Matrix values, std::vector<std::string> ids);
    /// Rows named "r0", "r1", ...
    explicit FeatureMatrix(numerics::Matrix values);
    static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t n() const noexcept { return values_.rows(); }
    std::size_t d() const noexcept { return values_.cols(); }
    std::span<const double> row(std::size_t i) const noexcept { return values_.row(i); }
    const numerics::Matrix& values() const noexcept { return values_; }
    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    numerics::Matrix values_;
    std::vector<std::string> ids_;
};

} // namespace radclust::clustering
