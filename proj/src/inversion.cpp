#include "freeconv/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "freeconv/error.hpp"

namespace freeconv {

void CdfTable::validate() const {
    constexpr double tol = 1e-12;
    if (xs.size() != values.size() || xs.size() != left_limits.size()) {
        throw Error(ErrorCode::InvalidArgument, "CDF table columns differ in length");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0 && !(xs[i] > xs[i - 1])) throw Error(ErrorCode::InvalidArgument, "CDF abscissae not increasing");
        if (left_limits[i] < -tol || left_limits[i] > values[i] + tol || values[i] > 1.0 + tol) {
            throw Error(ErrorCode::InvalidArgument, "CDF value out of range at x = " + std::to_string(xs[i]));
        }
        if (i > 0 && left_limits[i] < values[i - 1] - tol) {
            throw Error(ErrorCode::InvalidArgument, "CDF not monotone at x = " + std::to_string(xs[i]));
        }
    }
}

std::pair<double, double> CdfTable::at(double x) const {
    if (xs.empty()) return {0.0, 0.0};
    if (x < xs.front()) return {left_limits.front(), left_limits.front()};
    if (x > xs.back()) return {values.back(), values.back()};
    const auto it = std::lower_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    if (xs[i] == x) return {values[i], left_limits[i]};
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    const double v = values[i - 1] + t * (left_limits[i] - values[i - 1]);
    return {v, v};
}

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 2 || !(hi > lo)) throw Error(ErrorCode::InvalidArgument, "grid needs lo < hi and >= 2 points");
    std::vector<double> xs(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) xs[i] = lo + (hi - lo) * i / (points - 1);
    xs.back() = hi;
    return xs;
}

namespace {

std::vector<double> cell_masses(const std::function<Complex(Complex)>& g, std::span<const double> xs, double eta,
                                const InversionOptions& options) {
    auto density = [&](double x) {
        Complex value;
        try {
            value = g(Complex(x, eta));
        } catch (const Error& e) {
            throw Error(ErrorCode::EvaluatorFailed,
                        "at x = " + std::to_string(x) + ", eta = " + std::to_string(eta) + ": " + e.what(),
                        e.last_iterate());
        }
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
            throw Error(ErrorCode::EvaluatorFailed, "non-finite transform at x = " + std::to_string(x));
        }
        return -value.imag() / std::numbers::pi;
    };
    auto integrate = [&](double a, double b, double fa, double fb, int sub) {
        const double h = (b - a) / sub;
        double sum = 0.5 * (fa + fb);
        for (int k = 1; k < sub; ++k) sum += density(a + k * h);
        return sum * h;
    };

    std::vector<double> node(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) node[i] = density(xs[i]);

    std::vector<double> masses(xs.size() - 1);
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double h = xs[i + 1] - xs[i];
        const int sub = std::clamp(static_cast<int>(std::ceil(2.0 * h / eta)), 1, options.max_subdivision);
        double mass = integrate(xs[i], xs[i + 1], node[i], node[i + 1], sub);
        if (mass > options.atom_cell_mass) {
            mass = integrate(xs[i], xs[i + 1], node[i], node[i + 1], sub * options.atom_refinement);
        }
        masses[i] = mass;
    }
    return masses;
}

}  // namespace

CdfTable stieltjes_cdf(const std::function<Complex(Complex)>& g, std::span<const double> xs,
                       const InversionOptions& options) {
    const auto& schedule = options.eta_schedule;
    if (schedule.size() < 2) throw Error(ErrorCode::ScheduleTooShort, "eta schedule needs at least two levels");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] < schedule[i - 1]))) {
            throw Error(ErrorCode::InvalidArgument, "eta schedule must be positive and strictly decreasing");
        }
    }
    if (xs.size() < 2) throw Error(ErrorCode::InvalidArgument, "inversion grid needs at least two nodes");
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) throw Error(ErrorCode::InvalidArgument, "inversion grid must be increasing");
    }

    const double eta1 = schedule[schedule.size() - 2];
    const double eta2 = schedule.back();
    const auto coarse = cell_masses(g, xs, eta1, options);
    const auto fine = cell_masses(g, xs, eta2, options);

    CdfTable table;
    table.xs.assign(xs.begin(), xs.end());
    table.values.resize(xs.size());
    table.eta_used = eta2;
    double cumulative = 0.0;
    double running = 0.0;
    table.values[0] = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        cumulative += (eta1 * fine[i] - eta2 * coarse[i]) / (eta1 - eta2);
        running = std::max(running, std::clamp(cumulative, 0.0, 1.0));
        table.values[i + 1] = running;
    }
    table.left_limits = table.values;
    table.mass_warning = 1.0 - table.values.back() > options.mass_warning_level;
    return table;
}

DistanceReport kolmogorov(const CdfTable& a, const CdfTable& b) {
    std::vector<double> nodes;
    nodes.reserve(a.xs.size() + b.xs.size());
    std::merge(a.xs.begin(), a.xs.end(), b.xs.begin(), b.xs.end(), std::back_inserter(nodes));
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    DistanceReport report{0.0, nodes.empty() ? 0.0 : nodes.front(), "merged-grid-one-sided"};
    for (double x : nodes) {
        const auto [va, la] = a.at(x);
        const auto [vb, lb] = b.at(x);
        const double d = std::max(std::abs(va - vb), std::abs(la - lb));
        if (d > report.distance) {
            report.distance = d;
            report.argmax_x = x;
        }
    }
    report.distance = std::clamp(report.distance, 0.0, 1.0);
    return report;
}

CdfTable measure_to_cdf(const Measure& m) {
    std::vector<double> nodes = m.grid();
    for (const auto& atom : m.atoms()) nodes.push_back(atom.position);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    CdfTable table;
    table.xs = nodes;
    table.values.resize(nodes.size());
    table.left_limits.resize(nodes.size());
    double running = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto [value, left] = m.parts().cdf_at(nodes[i]);
        left = std::clamp(left, running, 1.0);
        value = std::clamp(value, left, 1.0);
        table.left_limits[i] = left;
        table.values[i] = value;
        running = value;
    }
    return table;
}

TailSmoothingCheck tail_smoothing_check(const Measure& m, double u) {
    if (!(u > 0.0)) throw Error(ErrorCode::InvalidArgument, "u must be positive");
    constexpr int nodes = 1000;
    const double h = u / (nodes - 1);
    double integral = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double t = i * h;
        const double f = 1.0 - characteristic_function(m, t).real();
        integral += (i == 0 || i == nodes - 1) ? 0.5 * f : f;
    }
    integral *= h;
    TailSmoothingCheck check;
    check.lhs = tail_mass(m, 2.0 / u);
    check.rhs = 2.0 / u * integral;
    check.holds = check.lhs <= check.rhs + 1e-9;
    return check;
}

void write_cdf_csv(std::ostream& out, const CdfTable& table) {
    out << "x,cdf,cdf_left\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < table.xs.size(); ++i) {
        out << table.xs[i] << ',' << table.values[i] << ',' << table.left_limits[i] << '\n';
    }
}

CdfTable read_cdf_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty CDF file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,cdf,cdf_left") throw Error(ErrorCode::ParseError, "CDF header must be 'x,cdf,cdf_left'");
    CdfTable table;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::istringstream row(line);
        double cols[3];
        for (int c = 0; c < 3; ++c) {
            std::string cell;
            if (!std::getline(row, cell, ',')) {
                throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected 3 columns");
            }
            try {
                std::size_t used = 0;
                cols[c] = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
        }
        table.xs.push_back(cols[0]);
        table.values.push_back(cols[1]);
        table.left_limits.push_back(cols[2]);
    }
    table.validate();
    return table;
}

}  // namespace freeconv
