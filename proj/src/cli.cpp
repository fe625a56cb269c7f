#include "freeconv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "freeconv/error.hpp"
#include "freeconv/idlaws.hpp"
#include "freeconv/inversion.hpp"
#include "freeconv/io.hpp"
#include "freeconv/nc_combinatorics.hpp"
#include "freeconv/rates.hpp"
#include "freeconv/subordination.hpp"

namespace freeconv::cli {
namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<double> parse_eta(const std::string& text) {
    std::vector<double> eta;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            eta.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "--eta expects comma-separated numbers, got '" + text + "'");
        }
    }
    if (eta.size() < 2) throw Error(ErrorCode::ScheduleTooShort, "--eta needs at least two levels");
    return eta;
}

CdfTable read_cdf_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    return read_cdf_csv(in);
}

void emit_cdf(const CdfTable& table, const std::string& path, std::ostream& out, std::ostream& err) {
    if (table.mass_warning) {
        err << "warning: recovered mass " << fmt12(table.values.back()) << " (tail mass lost on the grid)\n";
    }
    if (path.empty()) {
        write_cdf_csv(out, table);
        return;
    }
    std::ofstream file(path);
    if (!file) throw Error(ErrorCode::ParseError, "cannot write " + path);
    write_cdf_csv(file, table);
}

GridSpec default_power_grid(const Law& law, int n) {
    const double mean = law.moment(1);
    const double var = std::max(0.0, law.moment(2) - mean * mean);
    const double half = 3.0 * std::sqrt(n * var) + 1.0;
    return GridSpec{n * mean - half, n * mean + half, 2001};
}

struct Options {
    std::string measure;
    std::string second;
    int max_k = 8;
    int n = 1;
    std::string grid;
    std::string out_path;
    std::string eta;
};

InversionOptions inversion_from(const Options& o) {
    InversionOptions inv;
    if (!o.eta.empty()) inv.eta_schedule = parse_eta(o.eta);
    return inv;
}

int dispatch(CLI::App& app, const Options& o, std::ostream& out, std::ostream& err) {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();

    if (name == "moments" || name == "cumulants") {
        if (o.max_k < 1) throw Error(ErrorCode::InvalidArgument, "--max-k must be >= 1");
        const Law law = load_law(o.measure);
        MomentVector m;
        for (int k = 1; k <= o.max_k; ++k) m.values.push_back(law.moment(k));
        const auto& values = name == "moments" ? m.values : moments_to_cumulants(m).values;
        for (double v : values) out << fmt12(v) << '\n';
        return 0;
    }
    if (name == "power" || name == "cdf") {
        const Law law = load_law(o.measure);
        const int n = name == "power" ? o.n : 1;
        if (n < 1) throw Error(ErrorCode::InvalidArgument, "--n must be >= 1");
        const GridSpec grid = o.grid.empty() ? default_power_grid(law, n) : parse_grid(o.grid);
        const auto xs = linspace(grid.lo, grid.hi, grid.points);
        const auto g = free_power(law, n);
        emit_cdf(stieltjes_cdf([&](Complex z) { return g(z).value; }, xs, inversion_from(o)), o.out_path, out, err);
        return 0;
    }
    if (name == "convolve") {
        const Law a = load_law(o.measure);
        const Law b = load_law(o.second);
        GridSpec grid;
        if (o.grid.empty()) {
            const double mean = a.moment(1) + b.moment(1);
            const double var = std::max(0.0, a.moment(2) - a.moment(1) * a.moment(1)) +
                               std::max(0.0, b.moment(2) - b.moment(1) * b.moment(1));
            const double half = 3.0 * std::sqrt(var) + 1.0;
            grid = GridSpec{mean - half, mean + half, 2001};
        } else {
            grid = parse_grid(o.grid);
        }
        const auto xs = linspace(grid.lo, grid.hi, grid.points);
        const auto g = free_convolution(a.as_function(), b.as_function());
        emit_cdf(stieltjes_cdf([&](Complex z) { return g(z).value; }, xs, inversion_from(o)), o.out_path, out, err);
        return 0;
    }
    if (name == "distance") {
        const auto report = kolmogorov(read_cdf_file(o.measure), read_cdf_file(o.second));
        out << fmt12(report.distance) << '\n';
        return 0;
    }
    if (name == "idcheck") {
        const auto verdict = is_free_id_sampled(load_law(o.measure));
        out << to_string(verdict.kind);
        if (!verdict.passes()) out << ": " << verdict.detail;
        out << '\n';
        return 0;
    }
    if (name == "rates") {
        const std::filesystem::path path(o.measure);
        ExperimentConfig cfg = config_from_json(load_json(path), path.parent_path());
        if (!o.eta.empty()) cfg.eta_schedule = parse_eta(o.eta);
        if (!o.out_path.empty()) cfg.output_path = o.out_path;
        const auto report = run_rate_experiment(cfg);
        for (const auto& row : report.rows) {
            if (row.failed) err << "n = " << row.n << " failed: " << row.error << '\n';
        }
        if (cfg.output_path.empty()) {
            write_rate_csv(out, report);
        } else {
            std::ofstream file(cfg.output_path);
            if (!file) throw Error(ErrorCode::ParseError, "cannot write " + cfg.output_path);
            write_rate_csv(file, report);
        }
        return 0;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown subcommand " + name);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Free additive convolution toolkit", "freeconv"};
    app.require_subcommand(1);
    Options o;

    auto* moments = app.add_subcommand("moments", "Raw moments m_1..m_K");
    moments->add_option("measure", o.measure, "Measure JSON")->required();
    moments->add_option("--max-k", o.max_k, "Highest order")->capture_default_str();

    auto* cumulants = app.add_subcommand("cumulants", "Free cumulants alpha_1..alpha_K");
    cumulants->add_option("measure", o.measure, "Measure JSON")->required();
    cumulants->add_option("--max-k", o.max_k, "Highest order")->capture_default_str();

    auto* power = app.add_subcommand("power", "CDF of the n-fold free convolution power");
    power->add_option("measure", o.measure, "Measure JSON")->required();
    power->add_option("--n", o.n, "Power")->required();

    auto* cdf = app.add_subcommand("cdf", "CDF of a measure by Stieltjes inversion");
    cdf->add_option("measure", o.measure, "Measure JSON")->required();

    auto* convolve = app.add_subcommand("convolve", "CDF of the free convolution of two measures");
    convolve->add_option("a", o.measure, "First measure JSON")->required();
    convolve->add_option("b", o.second, "Second measure JSON")->required();

    for (auto* sub : {power, cdf, convolve}) {
        sub->add_option("--grid", o.grid, "lo:hi:points");
        sub->add_option("--out", o.out_path, "Output CSV (default stdout)");
        sub->add_option("--eta", o.eta, "Inversion schedule a,b,c");
    }

    auto* distance = app.add_subcommand("distance", "Kolmogorov distance between two CDF tables");
    distance->add_option("a", o.measure, "First CDF CSV")->required();
    distance->add_option("b", o.second, "Second CDF CSV")->required();

    auto* idcheck = app.add_subcommand("idcheck", "Sampled free infinite divisibility check");
    idcheck->add_option("measure", o.measure, "Measure JSON")->required();

    auto* rates = app.add_subcommand("rates", "Rate experiment against Meixner laws");
    rates->add_option("config", o.measure, "Experiment config JSON")->required();
    rates->add_option("--out", o.out_path, "Output CSV (overrides output_path)");
    rates->add_option("--eta", o.eta, "Inversion schedule a,b,c");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        return dispatch(app, o, out, err);
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        const bool usage = e.code() == ErrorCode::ParseError || e.code() == ErrorCode::InvalidArgument;
        return usage ? 1 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace freeconv::cli
