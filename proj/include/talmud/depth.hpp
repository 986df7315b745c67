#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "talmud/rule.hpp"

namespace talmud {

/// Raised when a book lacks levels inside the requested price window.
class InsufficientDepthError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct BookLevel {
    double price;
    double quantity;
};

/// An aggregated order-book snapshot: one level per price, bids sorted by
/// descending price, asks ascending, best bid strictly below best ask.
class OrderBookSnapshot {
public:
    OrderBookSnapshot(std::vector<BookLevel> bids, std::vector<BookLevel> asks)
        : bids_(aggregate(std::move(bids), "bid", /*descending=*/true)),
          asks_(aggregate(std::move(asks), "ask", /*descending=*/false)) {
        if (bids_.empty() || asks_.empty())
            throw std::domain_error("OrderBookSnapshot: both sides must be populated");
        if (best_bid() >= best_ask())
            throw std::domain_error("OrderBookSnapshot: best bid must be below best ask");
    }

    const std::vector<BookLevel>& bids() const { return bids_; }
    const std::vector<BookLevel>& asks() const { return asks_; }
    double best_bid() const { return bids_.front().price; }
    double best_ask() const { return asks_.front().price; }

private:
    static std::vector<BookLevel> aggregate(std::vector<BookLevel> levels, const char* side,
                                            bool descending) {
        std::map<double, double> by_price;
        for (const BookLevel& lvl : levels) {
            detail::require_positive(lvl.price, side);
            detail::require_positive(lvl.quantity, side);
            by_price[lvl.price] += lvl.quantity;
        }
        std::vector<BookLevel> out;
        out.reserve(by_price.size());
        for (const auto& [price, quantity] : by_price) out.push_back({price, quantity});
        if (descending) std::reverse(out.begin(), out.end());
        return out;
    }

    std::vector<BookLevel> bids_;
    std::vector<BookLevel> asks_;
};

struct DepthEstimate {
    double mid;
    double slope;       // two-sided average of |dq/dp|
    double bid_slope;   // bid-side secant estimate
    double ask_slope;   // ask-side secant estimate
};

/// Secant estimate of the book's local depth slope |dq/dp|: cumulative
/// quantity within `window` of the mid on each side, divided by the window
/// width, sides averaged.
inline DepthEstimate estimate_depth_slope(const OrderBookSnapshot& book, double window) {
    detail::require_positive(window, "estimate_depth_slope: window");
    const double mid = (book.best_bid() + book.best_ask()) / 2.0;

    double bid_qty = 0.0;
    for (const BookLevel& lvl : book.bids())
        if (lvl.price >= mid - window) bid_qty += lvl.quantity;
    double ask_qty = 0.0;
    for (const BookLevel& lvl : book.asks())
        if (lvl.price <= mid + window) ask_qty += lvl.quantity;

    if (bid_qty == 0.0) throw InsufficientDepthError("estimate_depth_slope: no bids within window");
    if (ask_qty == 0.0) throw InsufficientDepthError("estimate_depth_slope: no asks within window");

    const double bid_slope = bid_qty / window;
    const double ask_slope = ask_qty / window;
    return {mid, (bid_slope + ask_slope) / 2.0, bid_slope, ask_slope};
}

}  // namespace talmud
