#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "talmud/curves.hpp"
#include "talmud/depth.hpp"
#include "talmud/simulate.hpp"

namespace talmud {

/// Malformed input data; carries the 1-based line number.
class CsvParseError : public std::runtime_error {
public:
    CsvParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// File could not be opened or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Formats with 17 significant digits (general form), enough for the value
/// to re-parse bit-identically.
inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string strip_spaces(std::string s) {
    const auto from = s.find_first_not_of(" \t\r");
    if (from == std::string::npos) return {};
    const auto to = s.find_last_not_of(" \t\r");
    return s.substr(from, to - from + 1);
}

inline double parse_double(const std::string& field, std::size_t line, const char* what) {
    const std::string s = strip_spaces(field);
    double value = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw CsvParseError(line, std::string("cannot parse ") + what + " '" + field + "'");
    return value;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace detail

/// Reads a price-path CSV: header `price`, one decimal literal per row in
/// chronological order. Rejects nonpositive or non-finite prices.
inline PricePath<double> load_path_csv(std::istream& in, const std::string& source_name = "csv") {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw CsvParseError(1, "empty file, expected header 'price'");
    ++line_no;
    if (detail::strip_spaces(line) != "price")
        throw CsvParseError(line_no, "expected header 'price'");

    std::vector<double> prices;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::strip_spaces(line).empty() && in.eof()) break;  // trailing newline
        const double p = detail::parse_double(line, line_no, "price");
        if (!std::isfinite(p) || p <= 0.0)
            throw CsvParseError(line_no, "price must be positive and finite");
        prices.push_back(p);
    }
    if (prices.empty()) throw CsvParseError(line_no, "no price rows");
    return PricePath<double>(std::move(prices), "file(" + source_name + ")");
}

/// Reads an order-book CSV: header `side,price,quantity` with side in
/// {bid, ask}; rows may interleave sides, levels are aggregated per price.
inline OrderBookSnapshot load_order_book_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw CsvParseError(1, "empty file, expected header 'side,price,quantity'");
    ++line_no;
    if (detail::strip_spaces(line) != "side,price,quantity")
        throw CsvParseError(line_no, "expected header 'side,price,quantity'");

    std::vector<BookLevel> bids;
    std::vector<BookLevel> asks;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::strip_spaces(line).empty() && in.eof()) break;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 3) throw CsvParseError(line_no, "expected 3 fields");
        const std::string side = detail::strip_spaces(fields[0]);
        const double price = detail::parse_double(fields[1], line_no, "price");
        const double quantity = detail::parse_double(fields[2], line_no, "quantity");
        if (side == "bid")
            bids.push_back({price, quantity});
        else if (side == "ask")
            asks.push_back({price, quantity});
        else
            throw CsvParseError(line_no, "side must be 'bid' or 'ask', got '" + side + "'");
    }
    try {
        return OrderBookSnapshot(std::move(bids), std::move(asks));
    } catch (const std::domain_error& e) {
        throw CsvParseError(line_no, e.what());
    }
}

/// Writes a curve table as `q,p_supply,p_demand`; supply cells past the
/// cutoff are left empty.
inline void write_curves_csv(std::ostream& out, const std::vector<CurvePoint<double>>& table) {
    out << "q,p_supply,p_demand\n";
    for (const auto& row : table) {
        out << format_number(row.q) << ',';
        if (row.p_supply) out << format_number(*row.p_supply);
        out << ',' << format_number(row.p_demand) << '\n';
    }
}

inline void write_scan_csv(std::ostream& out, const std::vector<ScanRow<double>>& rows) {
    out << "threshold,trade_count,growth_ratio_total\n";
    for (const auto& row : rows)
        out << format_number(row.threshold) << ',' << row.trade_count << ','
            << format_number(row.growth_ratio_total) << '\n';
}

/// Optional annualization block of a report: compound growth assuming a
/// fixed number of equally weighted rebalances per year.
struct Annualization {
    std::size_t trades_per_year;
    double per_trade_pct_du;
    double annual_rate;
};

inline std::string report_to_json(const BacktestReport<double>& report,
                                  const std::optional<Annualization>& annualization = std::nullopt) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"initial_utility\": " << format_number(report.initial_utility) << ",\n";
    out << "  \"final_utility\": " << format_number(report.final_utility) << ",\n";
    out << "  \"growth_ratio_total\": " << format_number(report.growth_ratio_total) << ",\n";
    out << "  \"trade_count\": " << report.trade_count << ",\n";
    out << "  \"trades\": [";
    for (std::size_t i = 0; i < report.trades.size(); ++i) {
        const auto& t = report.trades[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "    {\"index\": " << t.index << ", \"exec_price\": " << format_number(t.trade.exec_price)
            << ", \"delta_q\": " << format_number(t.trade.delta_q)
            << ", \"delta_m\": " << format_number(t.trade.delta_m)
            << ", \"fee_paid\": " << format_number(t.trade.fee_paid)
            << ", \"utility_after\": " << format_number(t.utility_after) << "}";
    }
    out << (report.trades.empty() ? "]" : "\n  ]");
    if (annualization) {
        out << ",\n  \"annualization\": {\"trades_per_year\": " << annualization->trades_per_year
            << ", \"per_trade_pct_du\": " << format_number(annualization->per_trade_pct_du)
            << ", \"annual_rate\": " << format_number(annualization->annual_rate)
            << ", \"convention\": \"compound\"}";
    }
    out << "\n}\n";
    return out.str();
}

inline std::ifstream open_input_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

inline std::ofstream open_output_file(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace talmud
