// Command-line front end: utility evaluation, curve sampling, backtests,
// threshold scans, and order-book depth analysis as file-to-file operations.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "talmud/talmud.hpp"

namespace {

// sysexits-style codes so scripts can tell failure classes apart
constexpr int kExitUsage = 64;   // bad flags
constexpr int kExitDomain = 65;  // parameter outside the math's domain
constexpr int kExitParse = 66;   // malformed input file
constexpr int kExitIo = 74;      // file cannot be opened or written

std::size_t checked_count(double v, const char* what) {
    if (!(v >= 0) || v != std::floor(v) || v > 9e15)
        throw std::domain_error(std::string(what) + ": expected a nonnegative integer");
    return static_cast<std::size_t>(v);
}

struct PathSpec {
    std::string csv_file;
    std::vector<double> zigzag;  // p0,pct_dp,n_legs
    std::vector<double> gbm;     // p0,mu,sigma,n,seed

    talmud::PricePath<double> make() const {
        const int given = !csv_file.empty() + !zigzag.empty() + !gbm.empty();
        if (given != 1)
            throw CLI::ValidationError("path", "exactly one of --path-csv, --zigzag, --gbm is required");
        if (!csv_file.empty()) {
            auto in = talmud::open_input_file(csv_file);
            return talmud::load_path_csv(in, csv_file);
        }
        if (!zigzag.empty()) {
            if (zigzag.size() != 3)
                throw CLI::ValidationError("path", "--zigzag expects p0,pct_dp,n_legs");
            return talmud::gen_zigzag(zigzag[0], zigzag[1], checked_count(zigzag[2], "--zigzag n_legs"));
        }
        if (gbm.size() != 5)
            throw CLI::ValidationError("path", "--gbm expects p0,mu,sigma,n,seed");
        return talmud::gen_gbm(gbm[0], gbm[1], gbm[2], checked_count(gbm[3], "--gbm n"),
                               static_cast<std::uint64_t>(checked_count(gbm[4], "--gbm seed")));
    }

    void add_options(CLI::App* cmd) {
        cmd->add_option("--path-csv", csv_file, "Price path CSV (header 'price')");
        cmd->add_option("--zigzag", zigzag, "Generated zigzag path: p0,pct_dp,n_legs")->delimiter(',');
        cmd->add_option("--gbm", gbm, "Generated GBM path: p0,mu,sigma,n,seed")->delimiter(',');
    }
};

void write_text(const std::string& out_file, const std::string& text) {
    if (out_file.empty()) {
        std::cout << text;
    } else {
        auto out = talmud::open_output_file(out_file);
        out << text;
        if (!out) throw talmud::IoError("write to '" + out_file + "' failed");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted constant-proportion rebalancing: utility math, supply/demand curves, backtests"};
    app.require_subcommand(1);

    // utility
    auto* utility = app.add_subcommand("utility", "Evaluate the rule's utility u(m, q)");
    double u_m = 0, u_q = 0, u_p0 = 0, u_alpha = 0.5;
    utility->add_option("--m", u_m, "Money amount")->required();
    utility->add_option("--q", u_q, "Goods quantity")->required();
    utility->add_option("--p0", u_p0, "Reference price")->required();
    utility->add_option("--alpha", u_alpha, "Money weight in (0, 1)", true);
    utility->callback([&] {
        const talmud::UtilityContext<double> ctx(u_p0, talmud::Weights<double>(u_alpha));
        std::cout << talmud::format_number(talmud::utility_value(talmud::Holdings<double>(u_m, u_q), ctx))
                  << '\n';
    });

    // curves
    auto* curves = app.add_subcommand("curves", "Sample the supply/demand curves to CSV");
    double c_p0 = 0, c_q0 = 0, c_alpha = 0.5, c_qmax = 0;
    std::size_t c_n = 0;
    std::string c_out;
    curves->add_option("--p0", c_p0, "Anchor price")->required();
    curves->add_option("--q0", c_q0, "Anchor goods quantity")->required();
    curves->add_option("--alpha", c_alpha, "Money weight in (0, 1)", true);
    curves->add_option("--n", c_n, "Number of sample points (>= 2)")->required();
    curves->add_option("--qmax-fraction", c_qmax, "Supply cutoff as a fraction of q0, in (0, 1)")->required();
    curves->add_option("--out", c_out, "Output CSV file")->required();
    curves->callback([&] {
        const talmud::CurveAnchor<double> anchor(c_p0, c_q0, talmud::Weights<double>(c_alpha));
        const auto table = talmud::sample_curves(anchor, c_n, c_qmax);
        std::ostringstream text;
        talmud::write_curves_csv(text, table);
        write_text(c_out, text.str());
    });

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a trigger backtest, write a JSON report");
    PathSpec s_path;
    s_path.add_options(simulate);
    double s_alpha = 0.5, s_threshold = 0, s_fee = 0, s_wealth = 1;
    std::string s_out;
    std::size_t s_annualize = 0;
    bool s_annualize_given = false;
    simulate->add_option("--alpha", s_alpha, "Money weight in (0, 1)", true);
    simulate->add_option("--threshold", s_threshold, "Rebalance trigger on rel. price move, in (0, 2)")
        ->required();
    simulate->add_option("--fee", s_fee, "Proportional fee rate on executed notional", true);
    simulate->add_option("--wealth", s_wealth, "Initial wealth in money units", true);
    simulate->add_option("--out", s_out, "Output JSON file (stdout when omitted)");
    simulate->add_option("--annualize", s_annualize, "Append compound annual rate for N trades/year")
        ->trigger_on_parse()
        ->each([&](const std::string&) { s_annualize_given = true; });
    simulate->callback([&] {
        const talmud::Weights<double> w(s_alpha);
        const auto path = s_path.make();
        const auto report =
            talmud::run_backtest(path, w, talmud::TriggerPolicy<double>(s_threshold), s_fee, s_wealth);

        std::optional<talmud::Annualization> annualization;
        if (s_annualize_given) {
            double per_trade_ratio = 1.0;
            if (report.trade_count > 0)
                per_trade_ratio =
                    std::pow(report.growth_ratio_total, 1.0 / static_cast<double>(report.trade_count));
            const double pct_du = talmud::rel_diff(1.0, per_trade_ratio);
            const double rate = per_trade_ratio >= 1.0
                                    ? talmud::annualize(pct_du, s_annualize)
                                    : std::pow(per_trade_ratio, static_cast<double>(s_annualize)) - 1.0;
            annualization = talmud::Annualization{s_annualize, pct_du, rate};
        }
        write_text(s_out, talmud::report_to_json(report, annualization));
    });

    // scan
    auto* scan = app.add_subcommand("scan", "Backtest a list of trigger thresholds, write CSV rows");
    PathSpec n_path;
    n_path.add_options(scan);
    double n_alpha = 0.5, n_fee = 0;
    std::vector<double> n_thresholds;
    std::string n_out;
    scan->add_option("--alpha", n_alpha, "Money weight in (0, 1)", true);
    scan->add_option("--fee", n_fee, "Proportional fee rate on executed notional", true);
    scan->add_option("--thresholds", n_thresholds, "Comma-separated trigger thresholds")
        ->required()
        ->delimiter(',');
    scan->add_option("--out", n_out, "Output CSV file (stdout when omitted)");
    scan->callback([&] {
        const auto rows =
            talmud::threshold_scan(n_path.make(), talmud::Weights<double>(n_alpha), n_thresholds, n_fee);
        std::ostringstream text;
        talmud::write_scan_csv(text, rows);
        write_text(n_out, text.str());
    });

    // depth
    auto* depth = app.add_subcommand("depth", "Estimate book depth slope and the equivalent budget");
    std::string d_book;
    double d_window = 0;
    depth->add_option("--book-csv", d_book, "Order book CSV (side,price,quantity)")->required();
    depth->add_option("--window", d_window, "Price window on each side of the mid")->required();
    depth->callback([&] {
        auto in = talmud::open_input_file(d_book);
        const auto book = talmud::load_order_book_csv(in);
        const auto est = talmud::estimate_depth_slope(book, d_window);
        std::cout << "mid " << talmud::format_number(est.mid) << '\n'
                  << "slope " << talmud::format_number(est.slope) << '\n'
                  << "bid_slope " << talmud::format_number(est.bid_slope) << '\n'
                  << "ask_slope " << talmud::format_number(est.ask_slope) << '\n'
                  << "budget " << talmud::format_number(talmud::budget_from_depth(est.mid, est.slope))
                  << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const talmud::CsvParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
