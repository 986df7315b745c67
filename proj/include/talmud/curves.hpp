#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "talmud/rule.hpp"
#include "talmud/weights.hpp"

namespace talmud {

/// Anchor of the supply/demand curves: the price p0 at which the agent is
/// currently on target with q0 units of goods. The implied money balance is
/// m0 = (alpha/beta) * p0 * q0.
template <std::floating_point T = double>
class CurveAnchor {
public:
    CurveAnchor(T p0, T q0, Weights<T> weights) : p0_(p0), q0_(q0), weights_(weights) {
        detail::require_positive(p0, "CurveAnchor: p0");
        detail::require_positive(q0, "CurveAnchor: q0");
    }

    T p0() const { return p0_; }
    T q0() const { return q0_; }
    const Weights<T>& weights() const { return weights_; }

private:
    T p0_;
    T q0_;
    Weights<T> weights_;
};

/// Price at which rebalancing offers the marginal unit once qs units have
/// been sold: p_s = p0 * (q0 / (q0 - qs))^(1/alpha). Strictly increasing,
/// with an asymptote at qs = q0.
template <std::floating_point T>
T supply_price(T qs, const CurveAnchor<T>& a) {
    detail::require_nonnegative(qs, "supply_price: qs");
    if (qs >= a.q0()) throw std::domain_error("supply_price: qs must stay below q0 (asymptote)");
    return a.p0() * std::pow(a.q0() / (a.q0() - qs), T(1) / a.weights().alpha());
}

/// Price at which rebalancing bids for the marginal unit once qd units have
/// been bought: p_d = p0 * (q0 / (q0 + qd))^(1/alpha). Strictly decreasing.
template <std::floating_point T>
T demand_price(T qd, const CurveAnchor<T>& a) {
    detail::require_nonnegative(qd, "demand_price: qd");
    return a.p0() * std::pow(a.q0() / (a.q0() + qd), T(1) / a.weights().alpha());
}

namespace detail {

// 16-point Gauss-Legendre rule on [-1, 1]; positive abscissae only, the rule
// is symmetric.
inline constexpr std::array<double, 8> kGl16Nodes = {
    0.0950125098376374401853193,  0.2816035507792589132304605, 0.4580167776572273863424194,
    0.6178762444026437484466718,  0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884,  0.9894009349916499325961542};
inline constexpr std::array<double, 8> kGl16Weights = {
    0.1894506104550684962853967,  0.1826034150449235888667637, 0.1691565193950025381893121,
    0.1495959888165767320815017,  0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438,  0.0271524594117540948517806};

// Integrates f over [lo, hi] with composite 16-point Gauss-Legendre on
// geometrically spaced panels (lo > 0 required); suits smooth power-law
// integrands over wide ranges.
template <std::floating_point T, class F>
T integrate_geometric(F f, T lo, T hi, int panels) {
    const T ratio = std::pow(hi / lo, T(1) / T(panels));
    T total = T(0);
    T left = lo;
    for (int k = 0; k < panels; ++k) {
        const T right = (k + 1 == panels) ? hi : left * ratio;
        const T mid = (left + right) / T(2);
        const T half = (right - left) / T(2);
        T acc = T(0);
        for (std::size_t i = 0; i < kGl16Nodes.size(); ++i) {
            const T x = static_cast<T>(kGl16Nodes[i]) * half;
            acc += static_cast<T>(kGl16Weights[i]) * (f(mid - x) + f(mid + x));
        }
        total += acc * half;
        left = right;
    }
    return total;
}

}  // namespace detail

/// Area under the demand curve, equal to the money balance m0 implied by the
/// anchor: analytic value (alpha/beta) * p0 * q0, plus an independent
/// numeric estimate (quadrature over [0, 10^6 * q0] and the exact tail
/// integral beyond) for cross-checking.
template <std::floating_point T = double>
struct DemandArea {
    T analytic;
    T quadrature;
};

template <std::floating_point T>
DemandArea<T> demand_area(const CurveAnchor<T>& a) {
    const T alpha = a.weights().alpha();
    const T beta = a.weights().beta();
    const T analytic = alpha / beta * a.p0() * a.q0();

    const T cut = T(1e6) * a.q0();
    const T inv_alpha = T(1) / alpha;
    // Substituting t = q0 + qd turns the integrand into a pure power law.
    const T body = detail::integrate_geometric(
        [&](T t) { return a.p0() * std::pow(a.q0() / t, inv_alpha); }, a.q0(), a.q0() + cut, 64);
    const T tail =
        a.p0() * std::pow(a.q0(), inv_alpha) * std::pow(a.q0() + cut, T(1) - inv_alpha) * alpha / beta;
    return {analytic, body + tail};
}

/// Slopes of the two curves at the anchor: dp_s/dq_s = +p0/(alpha*q0) and
/// dp_d/dq_d = -p0/(alpha*q0). Equal absolute values.
template <std::floating_point T = double>
struct MarginalSlopes {
    T supply;
    T demand;
};

template <std::floating_point T>
MarginalSlopes<T> marginal_slopes(const CurveAnchor<T>& a) {
    const T s = a.p0() / (a.weights().alpha() * a.q0());
    return {s, -s};
}

/// One row of a curve table. The supply cell is empty past the sampling
/// cutoff (the curve diverges at q = q0).
template <std::floating_point T = double>
struct CurvePoint {
    T q;
    std::optional<T> p_supply;
    T p_demand;
};

/// Samples both curves at n evenly spaced quantities over
/// [0, qmax_fraction * q0]; the fraction bounds the supply sample away from
/// the asymptote.
template <std::floating_point T>
std::vector<CurvePoint<T>> sample_curves(const CurveAnchor<T>& a, std::size_t n, T qmax_fraction) {
    if (n < 2) throw std::domain_error("sample_curves: need at least two points");
    detail::require_finite(qmax_fraction, "sample_curves: qmax_fraction");
    if (qmax_fraction <= T(0) || qmax_fraction >= T(1))
        throw std::domain_error("sample_curves: qmax_fraction must lie in (0, 1)");

    const T cutoff = qmax_fraction * a.q0();
    std::vector<CurvePoint<T>> table;
    table.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const T q = cutoff * (T(i) / T(n - 1));
        std::optional<T> ps;
        if (q < a.q0()) ps = supply_price(q, a);
        table.push_back({q, ps, demand_price(q, a)});
    }
    return table;
}

/// Budget an even-weighted agent needs to match a book whose local depth
/// slope is |dq/dp|: u0 = 4 * p0^2 * |dq/dp|. The even rule only; no
/// weighted analogue is defined.
template <std::floating_point T>
T budget_from_depth(T p0, T abs_dq_dp) {
    detail::require_positive(p0, "budget_from_depth: p0");
    detail::require_nonnegative(abs_dq_dp, "budget_from_depth: slope");
    return T(4) * p0 * p0 * abs_dq_dp;
}

}  // namespace talmud
