#include "ovid/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ovid/error.hpp"

namespace ovid {

namespace {

[[noreturn]] void shape_error(const char* op, const Matrix& a, const Matrix& b) {
    throw ShapeMismatch(std::string(op) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
}

} // namespace

Matrix Matrix::row_vector(std::span<const double> values) {
    Matrix m(1, values.size());
    std::copy(values.begin(), values.end(), m.m_data.begin());
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw ShapeMismatch("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                                " columns, expected " + std::to_string(cols));
        }
        std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
    }
    return m;
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

void Matrix::fill(double value) { std::fill(m_data.begin(), m_data.end(), value); }

Matrix& Matrix::operator+=(const Matrix& other) {
    if (!same_shape(other)) {
        shape_error("add", *this, other);
    }
    for (std::size_t i = 0; i < m_data.size(); ++i) {
        m_data[i] += other.m_data[i];
    }
    return *this;
}

Matrix& Matrix::operator*=(double factor) {
    for (double& v : m_data) {
        v *= factor;
    }
    return *this;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        shape_error("matmul", a, b);
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out_row = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            const auto b_row = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out_row[j] += aik * b_row[j];
            }
        }
    }
    return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        shape_error("matmul_tn", a, b);
    }
    Matrix out(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const auto a_row = a.row(k);
        const auto b_row = b.row(k);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            auto out_row = out.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out_row[j] += a_row[i] * b_row[j];
            }
        }
    }
    return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        shape_error("matmul_nt", a, b);
    }
    Matrix out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto a_row = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const auto b_row = b.row(j);
            double sum = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                sum += a_row[k] * b_row[k];
            }
            out(i, j) = sum;
        }
    }
    return out;
}

Matrix hconcat(const Matrix& left, const Matrix& right) {
    if (left.rows() != right.rows()) {
        shape_error("hconcat", left, right);
    }
    Matrix out(left.rows(), left.cols() + right.cols());
    for (std::size_t r = 0; r < left.rows(); ++r) {
        auto dst = out.row(r);
        std::copy(left.row(r).begin(), left.row(r).end(), dst.begin());
        std::copy(right.row(r).begin(), right.row(r).end(), dst.begin() + static_cast<std::ptrdiff_t>(left.cols()));
    }
    return out;
}

Matrix slice_cols(const Matrix& m, std::size_t begin, std::size_t count) {
    if (begin + count > m.cols()) {
        throw ShapeMismatch("slice_cols past the last column");
    }
    Matrix out(m.rows(), count);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto src = m.row(r).subspan(begin, count);
        std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
}

void add_to_cols(Matrix& dst, const Matrix& src, std::size_t begin) {
    if (dst.rows() != src.rows() || begin + src.cols() > dst.cols()) {
        shape_error("add_to_cols", dst, src);
    }
    for (std::size_t r = 0; r < src.rows(); ++r) {
        for (std::size_t c = 0; c < src.cols(); ++c) {
            dst(r, begin + c) += src(r, c);
        }
    }
}

void debug_check_finite([[maybe_unused]] const Matrix& m, [[maybe_unused]] const char* where) {
#ifndef NDEBUG
    for (const double v : m.data()) {
        if (!std::isfinite(v)) {
            throw NonFiniteValue(std::string("non-finite value after ") + where);
        }
    }
#endif
}

} // namespace ovid
