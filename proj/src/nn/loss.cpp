#include "ovid/loss.hpp"

#include <algorithm>
#include <cmath>

namespace ovid {

double bce_loss(double probability, double target) noexcept {
    const double p = std::max(probability, bce_probability_floor);
    const double q = std::max(1.0 - probability, bce_probability_floor);
    return -(target * std::log(p) + (1.0 - target) * std::log(q));
}

double bce_grad(double probability, double target) noexcept {
    const double p = std::max(probability, bce_probability_floor);
    const double q = std::max(1.0 - probability, bce_probability_floor);
    return -target / p + (1.0 - target) / q;
}

} // namespace ovid
