#pragma once

#include <cmath>
#include <concepts>
#include <stdexcept>

namespace talmud {

/// Value split of the weighted rule: fraction `alpha` of wealth held as
/// money, `beta = 1 - alpha` as goods. Only alpha is stored, so
/// alpha + beta = 1 cannot be violated.
template <std::floating_point T = double>
class Weights {
public:
    explicit Weights(T alpha) : alpha_(alpha) {
        if (!std::isfinite(alpha) || alpha <= T(0) || alpha >= T(1))
            throw std::domain_error("Weights: alpha must lie strictly inside (0, 1)");
    }

    /// The even split alpha = beta = 1/2.
    static Weights even() { return Weights(T(0.5)); }

    T alpha() const { return alpha_; }
    T beta() const { return T(1) - alpha_; }

private:
    T alpha_;
};

}  // namespace talmud
