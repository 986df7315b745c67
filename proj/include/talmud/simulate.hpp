#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "talmud/rule.hpp"
#include "talmud/weights.hpp"

namespace talmud {

/// An ordered sequence of strictly positive prices plus a free-text note on
/// where it came from.
template <std::floating_point T = double>
class PricePath {
public:
    explicit PricePath(std::vector<T> prices, std::string meta = {})
        : prices_(std::move(prices)), meta_(std::move(meta)) {
        if (prices_.empty()) throw std::domain_error("PricePath: at least one price required");
        for (T p : prices_) detail::require_positive(p, "PricePath: price");
    }

    const std::vector<T>& prices() const { return prices_; }
    const std::string& meta() const { return meta_; }
    std::size_t size() const { return prices_.size(); }

private:
    std::vector<T> prices_;
    std::string meta_;
};

/// Fires a rebalance once the symmetric relative move from the last executed
/// price reaches the threshold. The comparison allows a few ulps of slack:
/// rel_diff carries rounding of that size, and a path constructed to move by
/// exactly the threshold must still fire.
template <std::floating_point T = double>
class TriggerPolicy {
public:
    explicit TriggerPolicy(T threshold) : threshold_(threshold) {
        detail::require_finite(threshold, "TriggerPolicy: threshold");
        if (threshold <= T(0) || threshold >= T(2))
            throw std::domain_error("TriggerPolicy: threshold must lie in (0, 2)");
    }

    T threshold() const { return threshold_; }

    bool should_fire(T last_rebalance_price, T price) const {
        constexpr T slack = T(16) * std::numeric_limits<T>::epsilon();
        return rel_diff(last_rebalance_price, price) >= threshold_ - slack;
    }

private:
    T threshold_;
};

template <std::floating_point T = double>
struct ExecutedTrade {
    std::size_t index;  // position in the price path
    Trade<T> trade;
    T utility_after;
};

template <std::floating_point T = double>
struct BacktestReport {
    std::vector<ExecutedTrade<T>> trades;
    std::vector<T> utility_series;  // utility after each trade
    T initial_utility;
    T final_utility;
    T growth_ratio_total;
    std::size_t trade_count;
};

/// Deterministic alternation p0, p1, p0, ... where each leg moves the price
/// by the symmetric relative difference pct_dp; length n_legs + 1.
template <std::floating_point T>
PricePath<T> gen_zigzag(T p0, T pct_dp, std::size_t n_legs) {
    detail::require_positive(p0, "gen_zigzag: p0");
    if (n_legs < 1) throw std::domain_error("gen_zigzag: need at least one leg");
    if (!std::isfinite(pct_dp) || pct_dp <= T(0) || pct_dp >= T(2))
        throw std::domain_error("gen_zigzag: pct_dp must lie in (0, 2)");

    const T p1 = p0 * ratio_from_rel_diff(pct_dp);
    std::vector<T> prices(n_legs + 1);
    for (std::size_t i = 0; i < prices.size(); ++i) prices[i] = (i % 2 == 0) ? p0 : p1;

    std::ostringstream meta;
    meta << "zigzag(p0=" << p0 << ", pct_dp=" << pct_dp << ", n_legs=" << n_legs << ")";
    return PricePath<T>(std::move(prices), meta.str());
}

/// Multiplicative random walk p_{k+1} = p_k * exp(mu - sigma^2/2 + sigma*z_k)
/// with standard normal draws obtained from a seeded Mersenne Twister via an
/// explicit Box-Muller transform; identical seeds give identical paths.
template <std::floating_point T>
PricePath<T> gen_gbm(T p0, T mu, T sigma, std::size_t n_steps, std::uint64_t seed) {
    detail::require_positive(p0, "gen_gbm: p0");
    detail::require_finite(mu, "gen_gbm: mu");
    detail::require_nonnegative(sigma, "gen_gbm: sigma");
    if (n_steps < 1) throw std::domain_error("gen_gbm: need at least one step");

    std::mt19937_64 rng(seed);
    auto unit = [&rng] {
        // top 53 bits, shifted into (0, 1)
        return (static_cast<T>(rng() >> 11) + T(0.5)) * T(0x1p-53);
    };

    std::vector<T> prices;
    prices.reserve(n_steps + 1);
    prices.push_back(p0);
    const T drift = mu - sigma * sigma / T(2);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const T u1 = unit();
        const T u2 = unit();
        const T z = std::sqrt(T(-2) * std::log(u1)) * std::cos(T(2) * std::numbers::pi_v<T> * u2);
        prices.push_back(prices.back() * std::exp(drift + sigma * z));
    }

    std::ostringstream meta;
    meta << "gbm(p0=" << p0 << ", mu=" << mu << ", sigma=" << sigma << ", n=" << n_steps
         << ", seed=" << seed << ")";
    return PricePath<T>(std::move(prices), meta.str());
}

/// Walks the path with holdings initialized on target at the first price and
/// rebalances at every tick whose move from the last executed price reaches
/// the trigger threshold. Utilities are measured with the context fixed at
/// the path start.
template <std::floating_point T>
BacktestReport<T> run_backtest(const PricePath<T>& path, const Weights<T>& w,
                               const TriggerPolicy<T>& policy, T fee_rate, T initial_wealth) {
    detail::require_positive(initial_wealth, "run_backtest: initial_wealth");

    const T p0 = path.prices().front();
    const UtilityContext<T> ctx(p0, w);
    Holdings<T> holdings = target_holdings(initial_wealth, p0, w);
    const T initial_utility = utility_value(holdings, ctx);

    BacktestReport<T> report;
    report.initial_utility = initial_utility;

    T ref_price = p0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const T price = path.prices()[i];
        if (!policy.should_fire(ref_price, price)) continue;
        auto [trade, next] = rebalance(holdings, price, w, fee_rate);
        holdings = next;
        ref_price = price;
        const T u = utility_value(holdings, ctx);
        report.trades.push_back({i, trade, u});
        report.utility_series.push_back(u);
    }

    report.final_utility = utility_value(holdings, ctx);
    report.growth_ratio_total = report.final_utility / initial_utility;
    report.trade_count = report.trades.size();
    return report;
}

/// Compound annual growth from one transaction's %du repeated
/// trades_per_year times: ratio_from_rel_diff(%du)^n - 1.
template <std::floating_point T>
T annualize(T per_trade_pct_du, std::size_t trades_per_year) {
    const T ratio = ratio_from_rel_diff(per_trade_pct_du);
    return std::pow(ratio, static_cast<T>(trades_per_year)) - T(1);
}

template <std::floating_point T = double>
struct ScanRow {
    T threshold;
    std::size_t trade_count;
    T growth_ratio_total;
};

/// One backtest per threshold over the same path; rows in input order. The
/// growth ratio is scale-free, so the runs use unit wealth.
template <std::floating_point T>
std::vector<ScanRow<T>> threshold_scan(const PricePath<T>& path, const Weights<T>& w,
                                       const std::vector<T>& thresholds, T fee_rate) {
    if (thresholds.empty()) throw std::domain_error("threshold_scan: empty threshold list");
    std::vector<ScanRow<T>> rows;
    rows.reserve(thresholds.size());
    for (T threshold : thresholds) {
        const auto report = run_backtest(path, w, TriggerPolicy<T>(threshold), fee_rate, T(1));
        rows.push_back({threshold, report.trade_count, report.growth_ratio_total});
    }
    return rows;
}

}  // namespace talmud
