#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ovid/matrix.hpp"

namespace ovid::testing {

inline constexpr double fd_step = 1e-5;
inline constexpr double grad_tolerance = 1e-4;

/// Central differences of `loss` with respect to every entry of `param`.
inline Matrix numeric_gradient(Matrix& param, const std::function<double()>& loss, double step = fd_step) {
    Matrix grad(param.rows(), param.cols());
    auto data = param.data();
    auto out = grad.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double saved = data[i];
        data[i] = saved + step;
        const double up = loss();
        data[i] = saved - step;
        const double down = loss();
        data[i] = saved;
        out[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

/// ||a - n|| / (||a|| + ||n||); zero when both vanish.
inline double relative_error(const Matrix& analytic, const Matrix& numeric) {
    double diff = 0.0;
    double a = 0.0;
    double n = 0.0;
    const auto ad = analytic.data();
    const auto nd = numeric.data();
    for (std::size_t i = 0; i < ad.size(); ++i) {
        diff += (ad[i] - nd[i]) * (ad[i] - nd[i]);
        a += ad[i] * ad[i];
        n += nd[i] * nd[i];
    }
    const double denom = std::sqrt(a) + std::sqrt(n);
    if (denom < 1e-10) {
        return std::sqrt(diff);
    }
    return std::sqrt(diff) / denom;
}

struct GradReport {
    std::string worst_name;
    double worst_error = 0.0;
    std::size_t checked = 0;

    void add(const std::string& name, double error) {
        ++checked;
        // NaN compares false and so always becomes the worst case.
        if (!(error <= worst_error)) {
            worst_error = error;
            worst_name = name;
        }
    }
    bool ok() const { return worst_error <= grad_tolerance; }
};

} // namespace ovid::testing
