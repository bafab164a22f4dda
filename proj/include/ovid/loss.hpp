#pragma once

namespace ovid {

inline constexpr double bce_probability_floor = 1e-12;

/// -[y ln p + (1 - y) ln(1 - p)] with both logarithm arguments floored at 1e-12.
double bce_loss(double probability, double target) noexcept;

/// dL/dp of bce_loss, using the same floors.
double bce_grad(double probability, double target) noexcept;

} // namespace ovid
