#include "freeconv/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "freeconv/error.hpp"

namespace freeconv {
namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw Error(ErrorCode::InvalidMeasure, std::string(what) + " must be finite");
    }
}

std::vector<Atom> canonical_atoms(std::vector<Atom> atoms) {
    for (const auto& a : atoms) {
        require_finite(a.position, "atom position");
        if (!(a.weight > 0.0)) {
            throw Error(ErrorCode::NonPositiveWeight,
                        "atom at " + std::to_string(a.position) + " has weight " + std::to_string(a.weight));
        }
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.position < b.position; });
    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    for (const auto& a : atoms) {
        if (!merged.empty() && a.position - merged.back().position <= kAtomMergeTolerance) {
            merged.back().weight += a.weight;
        } else {
            merged.push_back(a);
        }
    }
    return merged;
}

// Integral over one cell of (rho_c + slope * tau) * f(c + tau), tau in [-a, a],
// for f(x) = x^k, expanded binomially around the cell midpoint.
double cell_power_integral(double c, double a, double rho_c, double slope, int k) {
    double sum = 0.0;
    double binom = 1.0;
    // c^{k-j} for j = 0..k
    std::vector<double> cpow(static_cast<std::size_t>(k) + 1, 1.0);
    for (int j = 1; j <= k; ++j) cpow[j] = cpow[j - 1] * c;
    double apow = a;  // a^{j+1}
    for (int j = 0; j <= k; ++j) {
        const double ck = cpow[k - j];
        if (j % 2 == 0) {
            sum += rho_c * binom * ck * 2.0 * apow / (j + 1);
        } else {
            sum += slope * binom * ck * 2.0 * apow * a / (j + 2);
        }
        binom = binom * (k - j) / (j + 1);
        apow *= a;
    }
    return sum;
}

// (atanh(q) - q) / q and its q-derivative.
std::pair<Complex, Complex> atanh_remainder(Complex q) {
    if (std::abs(q) < 0.25) {
        const Complex q2 = q * q;
        Complex value = 0.0, deriv = 0.0;
        Complex p = q2;          // q^{2m}
        Complex pd = 2.0 * q;    // d/dq q^{2m}
        for (int m = 1; m <= 24; ++m) {
            value += p / double(2 * m + 1);
            deriv += pd / double(2 * m + 1);
            pd = pd * q2 * (double(2 * m + 2) / double(2 * m));
            p *= q2;
        }
        return {value, deriv};
    }
    const Complex at = std::atanh(q);
    const Complex value = (at - q) / q;
    const Complex deriv = (q / (1.0 - q * q) - at) / (q * q);
    return {value, deriv};
}

}  // namespace

FiniteMeasure::FiniteMeasure(std::vector<Atom> atoms, std::vector<double> grid, std::vector<double> values)
    : atoms_(canonical_atoms(std::move(atoms))), grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.size() != values_.size()) {
        throw Error(ErrorCode::InvalidMeasure, "density grid and values differ in length");
    }
    if (grid_.size() == 1) {
        throw Error(ErrorCode::InvalidMeasure, "density grid needs at least two nodes");
    }
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        require_finite(grid_[i], "grid node");
        require_finite(values_[i], "density value");
        if (values_[i] < 0.0) {
            throw Error(ErrorCode::InvalidMeasure, "negative density value at node " + std::to_string(i));
        }
        if (i > 0 && !(grid_[i] > grid_[i - 1])) {
            throw Error(ErrorCode::InvalidMeasure, "density grid must be strictly increasing");
        }
    }
}

bool FiniteMeasure::is_zero() const noexcept {
    return atoms_.empty() && std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double FiniteMeasure::atom_mass() const noexcept {
    return std::accumulate(atoms_.begin(), atoms_.end(), 0.0,
                           [](double s, const Atom& a) { return s + a.weight; });
}

double FiniteMeasure::density_mass() const noexcept {
    double mass = 0.0;
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        mass += 0.5 * (values_[i] + values_[i - 1]) * (grid_[i] - grid_[i - 1]);
    }
    return mass;
}

std::pair<double, double> FiniteMeasure::hull() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    if (!atoms_.empty()) {
        lo = atoms_.front().position;
        hi = atoms_.back().position;
    }
    if (has_density()) {
        lo = std::min(lo, grid_.front());
        hi = std::max(hi, grid_.back());
    }
    if (lo > hi) return {0.0, 0.0};
    return {lo, hi};
}

double FiniteMeasure::moment(int k) const {
    double sum = 0.0;
    for (const auto& a : atoms_) sum += a.weight * std::pow(a.position, k);
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        const double h = grid_[i] - grid_[i - 1];
        const double c = 0.5 * (grid_[i] + grid_[i - 1]);
        const double rho_c = 0.5 * (values_[i] + values_[i - 1]);
        const double slope = (values_[i] - values_[i - 1]) / h;
        sum += cell_power_integral(c, 0.5 * h, rho_c, slope, k);
    }
    return sum;
}

double FiniteMeasure::absolute_moment(double d) const {
    using boost::math::quadrature::gauss;
    double sum = 0.0;
    for (const auto& a : atoms_) sum += a.weight * std::pow(std::abs(a.position), d);
    auto piece = [&](double x0, double x1, double r0, double r1) {
        if (x1 <= x0) return 0.0;
        const double slope = (r1 - r0) / (x1 - x0);
        // Integrand is |x|^d (r0 + slope (x - x0)); exact when the piece starts at 0.
        if (x0 == 0.0 || x1 == 0.0) {
            const double len = x1 - x0;
            const double r_at0 = x0 == 0.0 ? r0 : r1;
            const double s = x0 == 0.0 ? slope : -slope;
            return r_at0 * std::pow(len, d + 1) / (d + 1) + s * std::pow(len, d + 2) / (d + 2);
        }
        auto f = [&](double x) { return std::pow(std::abs(x), d) * (r0 + slope * (x - x0)); };
        return gauss<double, 20>::integrate(f, x0, x1);
    };
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        const double x0 = grid_[i - 1], x1 = grid_[i];
        const double r0 = values_[i - 1], r1 = values_[i];
        if (x0 < 0.0 && x1 > 0.0) {
            const double r_mid = r0 + (r1 - r0) * (-x0) / (x1 - x0);
            sum += piece(x0, 0.0, r0, r_mid) + piece(0.0, x1, r_mid, r1);
        } else {
            sum += piece(x0, x1, r0, r1);
        }
    }
    return sum;
}

double FiniteMeasure::density_integral(double lo, double hi) const {
    double mass = 0.0;
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        const double x0 = grid_[i - 1], x1 = grid_[i];
        const double a = std::max(x0, lo), b = std::min(x1, hi);
        if (b <= a) continue;
        const double slope = (values_[i] - values_[i - 1]) / (x1 - x0);
        const double ra = values_[i - 1] + slope * (a - x0);
        const double rb = values_[i - 1] + slope * (b - x0);
        mass += 0.5 * (ra + rb) * (b - a);
    }
    return mass;
}

double FiniteMeasure::mass_in(double lo, double hi) const {
    double mass = density_integral(lo, hi);
    for (const auto& a : atoms_) {
        if (a.position >= lo && a.position <= hi) mass += a.weight;
    }
    return mass;
}

std::pair<double, double> FiniteMeasure::cdf_at(double x) const {
    const double dens = density_integral(-std::numeric_limits<double>::infinity(), x);
    double right = dens, left = dens;
    for (const auto& a : atoms_) {
        if (a.position < x) left += a.weight;
        if (a.position <= x) right += a.weight;
    }
    return {right, left};
}

Complex FiniteMeasure::fourier(double t) const {
    Complex sum = 0.0;
    for (const auto& a : atoms_) sum += a.weight * std::polar(1.0, t * a.position);
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        const double h = grid_[i] - grid_[i - 1];
        const double a = 0.5 * h;
        const double c = 0.5 * (grid_[i] + grid_[i - 1]);
        const double rho_c = 0.5 * (values_[i] + values_[i - 1]);
        const double slope = (values_[i] - values_[i - 1]) / h;
        const double u = t * a;
        double sinc, g;  // sin(u)/u and (sin u - u cos u)/u^2
        if (std::abs(u) < 1e-3) {
            const double u2 = u * u;
            sinc = 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
            g = u / 3.0 - u * u2 / 30.0 + u * u2 * u2 / 840.0;
        } else {
            sinc = std::sin(u) / u;
            g = (std::sin(u) - u * std::cos(u)) / (u * u);
        }
        const Complex inner(rho_c * 2.0 * a * sinc, slope * 2.0 * a * a * g);
        sum += std::polar(1.0, t * c) * inner;
    }
    return sum;
}

Jet FiniteMeasure::cauchy_jet(Complex z) const {
    Complex value = 0.0, deriv = 0.0;
    for (const auto& a : atoms_) {
        const Complex r = 1.0 / (z - a.position);
        value += a.weight * r;
        deriv -= a.weight * r * r;
    }
    // Exact integral of the linear interpolant over each cell: with w = z - c and
    // q = h / (2w), the cell contributes 2 rho_c atanh(q) + slope h (atanh(q) - q) / q.
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        const double h = grid_[i] - grid_[i - 1];
        const double c = 0.5 * (grid_[i] + grid_[i - 1]);
        const double rho_c = 0.5 * (values_[i] + values_[i - 1]);
        const double slope = (values_[i] - values_[i - 1]) / h;
        if (rho_c == 0.0 && slope == 0.0) continue;
        const Complex w = z - c;
        const Complex q = h / (2.0 * w);
        const Complex dq = -q / w;
        auto [rem, drem] = atanh_remainder(q);
        const Complex at = std::abs(q) < 0.25 ? q + q * rem : std::atanh(q);
        const Complex dat = 1.0 / (1.0 - q * q);
        value += 2.0 * rho_c * at + slope * h * rem;
        deriv += (2.0 * rho_c * dat + slope * h * drem) * dq;
    }
    return {value, deriv};
}

double FiniteMeasure::poisson_integral(double x, double y) const {
    double sum = 0.0;
    const double y2 = y * y;
    for (const auto& a : atoms_) {
        const double v = a.position - x;
        sum += a.weight / (v * v + y2);
    }
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        const double x0 = grid_[i - 1], x1 = grid_[i];
        const double slope = (values_[i] - values_[i - 1]) / (x1 - x0);
        const double v0 = x0 - x, v1 = x1 - x;
        const double base = values_[i - 1] + slope * (x - x0);
        const double angle = std::atan2(y * (v1 - v0), y2 + v0 * v1);
        const double logratio = std::log1p((v1 - v0) * (v1 + v0) / (v0 * v0 + y2));
        sum += base / y * angle + 0.5 * slope * logratio;
    }
    return sum;
}

FiniteMeasure FiniteMeasure::dilated(double s) const {
    std::vector<Atom> atoms = atoms_;
    for (auto& a : atoms) a.position /= s;
    std::vector<double> grid = grid_, values = values_;
    for (auto& g : grid) g /= s;
    for (auto& v : values) v *= s;
    return FiniteMeasure(std::move(atoms), std::move(grid), std::move(values));
}

FiniteMeasure FiniteMeasure::scaled_mass(double factor) const {
    std::vector<Atom> atoms = atoms_;
    for (auto& a : atoms) a.weight *= factor;
    std::vector<double> values = values_;
    for (auto& v : values) v *= factor;
    return FiniteMeasure(std::move(atoms), grid_, std::move(values));
}

Measure::Measure() : parts_({Atom{0.0, 1.0}}, {}, {}) {}

Measure::Measure(FiniteMeasure parts) : parts_(std::move(parts)) {
    const double mass = parts_.total_mass();
    if (std::abs(mass - 1.0) > kMassTolerance) {
        throw Error(ErrorCode::MassNotOne, "total mass is " + std::to_string(mass));
    }
}

double Measure::variance() const {
    const double m1 = parts_.moment(1);
    return parts_.moment(2) - m1 * m1;
}

Measure make_atomic(std::span<const Atom> atoms) {
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.weight > 0.0)) {
            throw Error(ErrorCode::NonPositiveWeight, "atom weight " + std::to_string(a.weight));
        }
        total += a.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw Error(ErrorCode::MassNotOne, "atom weights sum to " + std::to_string(total));
    }
    return Measure(FiniteMeasure(std::vector<Atom>(atoms.begin(), atoms.end()), {}, {}));
}

Measure make_atomic(std::initializer_list<Atom> atoms) {
    return make_atomic(std::span<const Atom>(atoms.begin(), atoms.size()));
}

Measure make_measure(std::vector<Atom> atoms, std::vector<double> grid, std::vector<double> values) {
    return Measure(FiniteMeasure(std::move(atoms), std::move(grid), std::move(values)));
}

Measure make_density(std::vector<double> grid, std::vector<double> values, bool normalize) {
    FiniteMeasure parts({}, std::move(grid), std::move(values));
    if (normalize) {
        const double mass = parts.total_mass();
        if (!(mass > 0.0)) throw Error(ErrorCode::MassNotOne, "density has zero mass");
        parts = parts.scaled_mass(1.0 / mass);
    }
    return Measure(std::move(parts));
}

double moment(const Measure& m, int k, int max_order) {
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "moment order must be nonnegative");
    if (k > max_order) {
        throw Error(ErrorCode::OrderTooLarge, "moment order " + std::to_string(k) + " exceeds " +
                                                  std::to_string(max_order));
    }
    return m.parts().moment(k);
}

double absolute_moment(const Measure& m, double d, int max_order) {
    if (!(d > 0.0)) throw Error(ErrorCode::InvalidArgument, "absolute moment order must be positive");
    if (d > max_order) {
        throw Error(ErrorCode::OrderTooLarge, "absolute moment order exceeds " + std::to_string(max_order));
    }
    return m.parts().absolute_moment(d);
}

MomentVector moment_vector(const Measure& m, int order, int max_order) {
    if (order < 1) throw Error(ErrorCode::InvalidArgument, "moment vector order must be >= 1");
    if (order > max_order) {
        throw Error(ErrorCode::OrderTooLarge, "moment order " + std::to_string(order) + " exceeds " +
                                                  std::to_string(max_order));
    }
    std::vector<double> all(static_cast<std::size_t>(order) + 1);
    for (int k = 0; k <= order; ++k) all[k] = m.parts().moment(k);

    const int size = order / 2 + 1;
    Eigen::MatrixXd hankel(size, size);
    double scale = 1.0;
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            hankel(i, j) = all[i + j];
            scale = std::max(scale, std::abs(all[i + j]));
        }
    }
    // Normalize the diagonal so the eigenvalue test is scale free.
    Eigen::VectorXd d = hankel.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd normalized = d.asDiagonal() * hankel * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(normalized, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-9) {
        throw Error(ErrorCode::InvalidMeasure, "Hankel moment matrix is not positive semidefinite");
    }
    return MomentVector{std::vector<double>(all.begin() + 1, all.end())};
}

Measure truncate(const Measure& m, double cutoff) {
    if (!(cutoff > 0.0)) throw Error(ErrorCode::InvalidArgument, "truncation cutoff must be positive");
    const auto& parts = m.parts();
    double moved = 0.0;
    std::vector<Atom> atoms;
    for (const auto& a : parts.atoms()) {
        if (std::abs(a.position) <= cutoff) {
            atoms.push_back(a);
        } else {
            moved += a.weight;
        }
    }
    std::vector<double> grid, values;
    if (parts.has_density()) {
        const auto& g = parts.grid();
        const auto& v = parts.values();
        auto value_at = [&](double x) {
            const auto it = std::upper_bound(g.begin(), g.end(), x);
            if (it == g.begin() || it == g.end()) return x == g.back() ? v.back() : 0.0;
            const std::size_t i = static_cast<std::size_t>(it - g.begin());
            return v[i - 1] + (v[i] - v[i - 1]) * (x - g[i - 1]) / (g[i] - g[i - 1]);
        };
        const double lo = std::max(g.front(), -cutoff);
        const double hi = std::min(g.back(), cutoff);
        if (hi > lo) {
            grid.push_back(lo);
            values.push_back(value_at(lo));
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (g[i] > lo && g[i] < hi) {
                    grid.push_back(g[i]);
                    values.push_back(v[i]);
                }
            }
            grid.push_back(hi);
            values.push_back(value_at(hi));
        }
        moved += parts.density_mass() - FiniteMeasure({}, grid, values).density_mass();
    }
    if (moved > 0.0) atoms.push_back(Atom{0.0, moved});
    if (grid.size() < 2) {
        grid.clear();
        values.clear();
    }
    return Measure(FiniteMeasure(std::move(atoms), std::move(grid), std::move(values)));
}

Complex characteristic_function(const Measure& m, double t) { return m.parts().fourier(t); }

Measure dilate(const Measure& m, double s) {
    if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "dilation factor must be positive");
    if (s == 1.0) return m;
    return Measure(m.parts().dilated(s));
}

Measure shift(const Measure& m, double c) {
    std::vector<Atom> atoms = m.atoms();
    for (auto& a : atoms) a.position += c;
    std::vector<double> grid = m.grid();
    for (auto& g : grid) g += c;
    return Measure(FiniteMeasure(std::move(atoms), std::move(grid), m.values()));
}

double tail_mass(const Measure& m, double cutoff) {
    if (!(cutoff > 0.0)) throw Error(ErrorCode::InvalidArgument, "tail cutoff must be positive");
    const double inside = m.parts().mass_in(-cutoff, cutoff);
    return std::clamp(m.parts().total_mass() - inside, 0.0, 1.0);
}

}  // namespace freeconv
