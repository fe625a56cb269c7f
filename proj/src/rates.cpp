#include "freeconv/rates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "freeconv/error.hpp"
#include "freeconv/io.hpp"

namespace freeconv {

using nlohmann::json;

GridSpec parse_grid(const std::string& text) {
    GridSpec grid;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &grid.lo, &grid.hi, &grid.points, &tail) != 3) {
        throw Error(ErrorCode::ParseError, "grid must look like lo:hi:points, got '" + text + "'");
    }
    if (!(grid.hi > grid.lo) || grid.points < 2) {
        throw Error(ErrorCode::InvalidArgument, "grid needs lo < hi and at least two points");
    }
    return grid;
}

void ExperimentConfig::validate() const {
    if (n_values.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two values of n");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] < 1 || (i > 0 && n_values[i] <= n_values[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "n_values must be positive and increasing");
        }
    }
    if (grid.points < 101) throw Error(ErrorCode::InvalidArgument, "grid needs at least 101 points");
    if (!(grid.hi > grid.lo)) throw Error(ErrorCode::InvalidArgument, "grid needs lo < hi");
}

ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;
    try {
        const json& m = j.at("measure");
        if (m.is_string()) {
            std::filesystem::path p = m.get<std::string>();
            if (p.is_relative()) p = base_dir / p;
            cfg.measure = load_law(p);
        } else {
            cfg.measure = law_from_json(m);
        }
        cfg.n_values = j.at("n_values").get<std::vector<int>>();
        if (j.contains("grid")) {
            const json& g = j["grid"];
            if (g.is_string()) {
                cfg.grid = parse_grid(g.get<std::string>());
            } else if (g.is_array() && g.size() == 3) {
                cfg.grid = GridSpec{g[0].get<double>(), g[1].get<double>(), g[2].get<int>()};
            } else {
                cfg.grid = GridSpec{g.at("lo").get<double>(), g.at("hi").get<double>(), g.at("points").get<int>()};
            }
        }
        if (j.contains("eta_schedule")) cfg.eta_schedule = j["eta_schedule"].get<std::vector<double>>();
        if (j.contains("target")) {
            const json& t = j["target"];
            if (t.is_string()) {
                if (t.get<std::string>() != "meixner_auto") {
                    throw Error(ErrorCode::ParseError, "target must be \"meixner_auto\" or a family object");
                }
            } else {
                cfg.target = family_from_json(t.contains("family") ? t["family"] : t);
            }
        }
        cfg.output_path = j.value("output_path", std::string());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

LogLogFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t k = x.size();
    if (k < 2 || y.size() != k) throw Error(ErrorCode::InvalidArgument, "fit needs two or more points");
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(k), ly(k);
    for (std::size_t i = 0; i < k; ++i) {
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        mx += lx[i];
        my += ly[i];
    }
    mx /= double(k);
    my /= double(k);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (k > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
            ssr += r * r;
        }
        fit.slope_stderr = std::sqrt(ssr / double(k - 2) / sxx);
    }
    return fit;
}

int worker_threads() {
    int cap = 0;
    if (const char* env = std::getenv("FREECONV_THREADS")) cap = std::atoi(env);
    if (cap <= 0) cap = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(cap, 1);
}

namespace {

RateRow run_row(const ExperimentConfig& cfg, int n, double m3, std::span<const double> xs) {
    RateRow row;
    row.n = n;
    row.a_n = m3 / std::sqrt(double(n));
    try {
        const Law scaled = cfg.measure.dilated(std::sqrt(double(n)));
        const CauchyFunction power = free_power(scaled, n, cfg.solver);
        InversionOptions inv;
        inv.eta_schedule = cfg.eta_schedule;
        const CdfTable lhs = stieltjes_cdf([&](Complex z) { return power(z).value; }, xs, inv);
        const FamilySpec target = cfg.target ? *cfg.target : FamilySpec::meixner(row.a_n);
        const CdfTable rhs = stieltjes_cdf([&](Complex z) { return family_cauchy(target, z); }, xs, inv);
        row.distance = kolmogorov(lhs, rhs).distance;
    } catch (const Error& e) {
        row.failed = true;
        row.error = e.what();
        row.distance = std::nan("");
    }
    return row;
}

}  // namespace

RateReport run_rate_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const double m1 = cfg.measure.moment(1);
    const double m2 = cfg.measure.moment(2);
    if (std::abs(m1) > 1e-9 || std::abs(m2 - 1.0) > 1e-9) {
        throw Error(ErrorCode::NotNormalized, "rate experiments need mean 0 and second moment 1 (got " +
                                                  std::to_string(m1) + ", " + std::to_string(m2) + ")");
    }
    const double m3 = cfg.measure.moment(3);
    const auto xs = linspace(cfg.grid.lo, cfg.grid.hi, cfg.grid.points);

    RateReport report;
    report.rows.resize(cfg.n_values.size());
    const int workers = std::min<int>(worker_threads(), static_cast<int>(cfg.n_values.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cfg.n_values.size(); i = next++) {
            report.rows[i] = run_row(cfg, cfg.n_values[i], m3, xs);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    }

    std::vector<double> ns, ds;
    for (const auto& row : report.rows) {
        if (!row.failed && row.distance > 0.0) {
            ns.push_back(row.n);
            ds.push_back(row.distance);
        }
    }
    report.fitted = static_cast<int>(ns.size());
    if (ns.size() >= 2) {
        const auto fit = fit_log_log(ns, ds);
        report.slope = fit.slope;
        report.slope_stderr = fit.slope_stderr;
    } else {
        report.slope = std::nan("");
        report.slope_stderr = std::nan("");
    }
    return report;
}

void write_rate_csv(std::ostream& out, const RateReport& report) {
    char buf[128];
    out << "n,a_n,distance\n";
    for (const auto& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g\n", row.n, row.a_n, row.distance);
        out << buf;
    }
    for (const auto& row : report.rows) {
        if (row.failed) out << "# failed n=" << row.n << ": " << row.error << '\n';
    }
    std::snprintf(buf, sizeof buf, "# slope=%.12g\n# slope_stderr=%.12g\n", report.slope, report.slope_stderr);
    out << buf;
}

}  // namespace freeconv
