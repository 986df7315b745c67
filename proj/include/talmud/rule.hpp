#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "talmud/weights.hpp"

namespace talmud {

namespace detail {

template <std::floating_point T>
void require_finite(T v, const char* what) {
    if (!std::isfinite(v)) throw std::domain_error(std::string(what) + ": value must be finite");
}

template <std::floating_point T>
void require_positive(T v, const char* what) {
    require_finite(v, what);
    if (v <= T(0)) throw std::domain_error(std::string(what) + ": value must be positive");
}

template <std::floating_point T>
void require_nonnegative(T v, const char* what) {
    require_finite(v, what);
    if (v < T(0)) throw std::domain_error(std::string(what) + ": value must be nonnegative");
}

}  // namespace detail

/// A portfolio state: `money` units of money and `goods` units of goods.
template <std::floating_point T = double>
class Holdings {
public:
    Holdings(T money, T goods) : money_(money), goods_(goods) {
        detail::require_nonnegative(money, "Holdings: money");
        detail::require_nonnegative(goods, "Holdings: goods");
    }

    T money() const { return money_; }
    T goods() const { return goods_; }

    /// Total value at the given price, in money units.
    T wealth_at(T price) const { return money_ + price * goods_; }

private:
    T money_;
    T goods_;
};

/// Fixes the cardinal scale of the utility: the reference price p0 at which
/// the holdings were last on target, plus the rule's weights. The efficiency
/// coefficient A = p0^beta / (alpha^alpha * beta^beta) is cached at
/// construction; for alpha = 1/2 it reduces to 2*sqrt(p0).
template <std::floating_point T = double>
class UtilityContext {
public:
    UtilityContext(T reference_price, Weights<T> weights) : p0_(reference_price), weights_(weights) {
        detail::require_positive(reference_price, "UtilityContext: reference price");
        const T a = weights.alpha();
        const T b = weights.beta();
        efficiency_ = std::pow(p0_, b) / (std::pow(a, a) * std::pow(b, b));
    }

    T reference_price() const { return p0_; }
    const Weights<T>& weights() const { return weights_; }
    T efficiency() const { return efficiency_; }

private:
    T p0_;
    Weights<T> weights_;
    T efficiency_;
};

/// One rebalancing transaction. `delta_q > 0` buys goods; `delta_m` is the
/// signed change of the money balance and already includes the fee, so with
/// fee_paid = 0 it equals -exec_price * delta_q exactly.
template <std::floating_point T = double>
struct Trade {
    T exec_price;
    T delta_q;
    T delta_m;
    T fee_paid;
};

/// Growth of a single rebalancing step: the utility ratio u1/u0 and the
/// symmetric relative differences of utility and price.
template <std::floating_point T = double>
struct GrowthFigures {
    T ratio;
    T pct_du;
    T pct_dp;
};

/// Cobb-Douglas utility of the rule, in money units:
///   u(m, q) = p0^beta / (alpha^alpha * beta^beta) * m^alpha * q^beta.
/// Degree-1 homogeneous in (m, q).
template <std::floating_point T>
T utility_value(const Holdings<T>& h, const UtilityContext<T>& ctx) {
    const T a = ctx.weights().alpha();
    return ctx.efficiency() * std::pow(h.money(), a) * std::pow(h.goods(), T(1) - a);
}

/// Holdings that split `wealth` per the rule at `price`: alpha of value in
/// money, beta in goods.
template <std::floating_point T>
Holdings<T> target_holdings(T wealth, T price, const Weights<T>& w) {
    detail::require_nonnegative(wealth, "target_holdings: wealth");
    detail::require_positive(price, "target_holdings: price");
    return Holdings<T>(w.alpha() * wealth, w.beta() * wealth / price);
}

/// Trades back onto target at `exec_price`. The target is computed on
/// pre-fee wealth; the fee (fee_rate on executed notional) is then taken
/// out of the money leg.
template <std::floating_point T>
std::pair<Trade<T>, Holdings<T>> rebalance(const Holdings<T>& h, T exec_price, const Weights<T>& w,
                                           T fee_rate = T(0)) {
    detail::require_positive(exec_price, "rebalance: exec_price");
    detail::require_nonnegative(fee_rate, "rebalance: fee_rate");
    if (fee_rate >= T(1)) throw std::domain_error("rebalance: fee_rate must be below 1");

    const Holdings<T> target = target_holdings(h.wealth_at(exec_price), exec_price, w);
    const T delta_q = target.goods() - h.goods();
    const T fee = fee_rate * exec_price * std::abs(delta_q);
    const T delta_m = -exec_price * delta_q - fee;
    const T new_money = h.money() + delta_m;
    if (new_money < T(0)) throw std::domain_error("rebalance: fee exhausts the money leg");

    return {Trade<T>{exec_price, delta_q, delta_m, fee}, Holdings<T>(new_money, target.goods())};
}

/// Utility ratio u1/u0 of a fee-free rebalance from p0 to p1: the weighted
/// arithmetic mean of the prices over their weighted geometric mean,
///   (alpha*p0 + beta*p1) / (p0^alpha * p1^beta).
/// Equals 1 iff p0 == p1 and exceeds 1 otherwise (AM-GM).
template <std::floating_point T>
T growth_ratio(T p0, T p1, const Weights<T>& w) {
    detail::require_positive(p0, "growth_ratio: p0");
    detail::require_positive(p1, "growth_ratio: p1");
    const T a = w.alpha();
    const T b = w.beta();
    return (a * p0 + b * p1) / (std::pow(p0, a) * std::pow(p1, b));
}

/// Symmetric relative difference 2*|a - b| / (a + b); ranges over [0, 2).
template <std::floating_point T>
T rel_diff(T a, T b) {
    detail::require_positive(a, "rel_diff: a");
    detail::require_positive(b, "rel_diff: b");
    return T(2) * std::abs(a - b) / (a + b);
}

/// Inverse of rel_diff for an upward move: the ratio b/a with
/// rel_diff(a, b) = d and b > a, namely (2 + d) / (2 - d).
template <std::floating_point T>
T ratio_from_rel_diff(T d) {
    detail::require_finite(d, "ratio_from_rel_diff: d");
    if (d < T(0) || d >= T(2)) throw std::domain_error("ratio_from_rel_diff: d must lie in [0, 2)");
    return (T(2) + d) / (T(2) - d);
}

/// Relative utility growth per transaction for the even rule,
///   %du = (16 - 8*sqrt(4 - d^2)) / d^2 - 2  with d = %dp,
/// evaluated through the cancellation-free rearrangement
///   %du = 2*d^2 / (2 + sqrt(4 - d^2))^2,
/// which is exact down to d = 0 (returned as the limit 0).
template <std::floating_point T>
T pct_du_exact(T pct_dp) {
    detail::require_finite(pct_dp, "pct_du_exact: pct_dp");
    if (pct_dp < T(0) || pct_dp >= T(2)) throw std::domain_error("pct_du_exact: pct_dp must lie in [0, 2)");
    const T s = std::sqrt(T(4) - pct_dp * pct_dp);
    const T t = T(2) + s;
    return T(2) * pct_dp * pct_dp / (t * t);
}

/// Leading quadratic term of %du: (alpha*beta/2) * (%dp)^2. For the even
/// rule this is (%dp)^2 / 8.
template <std::floating_point T>
T pct_du_quadratic(T pct_dp, const Weights<T>& w) {
    detail::require_finite(pct_dp, "pct_du_quadratic: pct_dp");
    if (pct_dp < T(0) || pct_dp >= T(2))
        throw std::domain_error("pct_du_quadratic: pct_dp must lie in [0, 2)");
    return w.alpha() * w.beta() / T(2) * pct_dp * pct_dp;
}

/// Growth figures for one fee-free rebalance from p0 to p1.
template <std::floating_point T>
GrowthFigures<T> growth_figures(T p0, T p1, const Weights<T>& w) {
    const T ratio = growth_ratio(p0, p1, w);
    return GrowthFigures<T>{ratio, rel_diff(T(1), ratio), rel_diff(p0, p1)};
}

/// Grid value maximizing the small-move growth coefficient alpha*(1-alpha)/2.
/// Ties (the coefficient is symmetric about 1/2) resolve to the smallest alpha.
template <std::floating_point T>
T optimal_alpha_scan(const std::vector<T>& grid) {
    if (grid.empty()) throw std::domain_error("optimal_alpha_scan: empty grid");
    bool found = false;
    T best_alpha = T(0);
    T best_coeff = T(0);
    for (T a : grid) {
        Weights<T> w(a);  // validates (0, 1)
        const T coeff = w.alpha() * w.beta() / T(2);
        if (!found || coeff > best_coeff || (coeff == best_coeff && a < best_alpha)) {
            found = true;
            best_alpha = a;
            best_coeff = coeff;
        }
    }
    return best_alpha;
}

}  // namespace talmud
