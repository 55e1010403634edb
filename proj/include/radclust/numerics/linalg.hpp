#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "radclust/error.hpp"

namespace radclust::numerics {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const noexcept {
        return {data_.data() + r * cols_, cols_};
    }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    Matrix transposed() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);

/// Max absolute row sum.
double norm_inf(const Matrix& m);

/// Square matrix with values[i][j] == values[j][i] exactly.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n) : m_(n, n) {}
    /// Symmetrizes by averaging m and its transpose. Throws ShapeError if m
    /// is not square.
    explicit SymMatrix(const Matrix& m);

    std::size_t size() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
    /// Writes both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double v) noexcept {
        m_(i, j) = v;
        m_(j, i) = v;
    }
    const Matrix& matrix() const noexcept { return m_; }

private:
    Matrix m_;
};

struct SymEigen {
    std::vector<double> values; ///< ascending
    Matrix vectors;             ///< column i pairs with values[i]
};

class EigenNotConverged : public NumericError {
public:
    EigenNotConverged(double off_norm, int sweeps);
    double off_norm() const noexcept { return off_norm_; }

private:
    double off_norm_;
};

class NotPositiveDefinite : public NumericError {
public:
    explicit NotPositiveDefinite(std::size_t pivot);
    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

inline constexpr int kJacobiMaxSweeps = 100;

/// Cyclic Jacobi eigen-decomposition. Throws EigenNotConverged when the
/// off-diagonal mass has not vanished after max_sweeps.
SymEigen sym_eigen(const SymMatrix& m, int max_sweeps = kJacobiMaxSweeps);

/// Lower-triangular L with L * L^T == m. Throws NotPositiveDefinite naming
/// the 0-based pivot that failed.
Matrix cholesky(const SymMatrix& m);

/// Euclidean distances between the rows of x.
SymMatrix pairwise_distances(const Matrix& x);

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

} // namespace radclust::numerics
