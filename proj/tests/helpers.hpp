#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "radclust/numerics/linalg.hpp"
#include "radclust/numerics/rng.hpp"

namespace testing {

inline radclust::numerics::Matrix random_matrix(std::size_t rows, std::size_t cols, radclust::numerics::RngStream& rng,
                                                double scale = 1.0) {
    radclust::numerics::Matrix m(rows, cols);
    for (double& v : m.data()) {
        v = scale * (2.0 * rng.next_uniform() - 1.0);
    }
    return m;
}

inline radclust::numerics::SymMatrix random_symmetric(std::size_t n, radclust::numerics::RngStream& rng) {
    radclust::numerics::SymMatrix s(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            s.set(i, j, 2.0 * rng.next_uniform() - 1.0);
        }
    }
    return s;
}

inline oracle::Rows to_rows(const radclust::numerics::Matrix& m) {
    oracle::Rows rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        rows[i].assign(m.row(i).begin(), m.row(i).end());
    }
    return rows;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("radclust_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing
