#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ovid {

/// Dense row-major matrix of doubles. Row vectors are 1 x n.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : m_rows(rows), m_cols(cols), m_data(rows * cols, fill) {}

    static Matrix row_vector(std::span<const double> values);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows, std::size_t cols);
    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return m_rows; }
    std::size_t cols() const noexcept { return m_cols; }
    std::size_t size() const noexcept { return m_data.size(); }
    bool empty() const noexcept { return m_data.empty(); }

    double& operator()(std::size_t r, std::size_t c) noexcept { return m_data[r * m_cols + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return m_data[r * m_cols + c]; }

    std::span<double> row(std::size_t r) noexcept { return {m_data.data() + r * m_cols, m_cols}; }
    std::span<const double> row(std::size_t r) const noexcept { return {m_data.data() + r * m_cols, m_cols}; }

    std::span<double> data() noexcept { return m_data; }
    std::span<const double> data() const noexcept { return m_data; }

    bool same_shape(const Matrix& other) const noexcept { return m_rows == other.m_rows && m_cols == other.m_cols; }

    void fill(double value);
    Matrix& operator+=(const Matrix& other);
    Matrix& operator*=(double factor);

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<double> m_data;
};

Matrix matmul(const Matrix& a, const Matrix& b);
/// aᵀ · b
Matrix matmul_tn(const Matrix& a, const Matrix& b);
/// a · bᵀ
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix hconcat(const Matrix& left, const Matrix& right);
Matrix slice_cols(const Matrix& m, std::size_t begin, std::size_t count);
/// dst[:, begin:begin+src.cols] += src
void add_to_cols(Matrix& dst, const Matrix& src, std::size_t begin);

/// Throws NonFiniteValue on NaN/Inf. Compiled out with NDEBUG.
void debug_check_finite(const Matrix& m, const char* where);

} // namespace ovid
