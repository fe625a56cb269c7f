#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

namespace freeconv {

using Complex = std::complex<double>;

/// Value of an analytic function together with its first derivative.
struct Jet {
    Complex value;
    Complex derivative;
};

struct Atom {
    double position = 0.0;
    double weight = 0.0;

    friend bool operator==(const Atom&, const Atom&) = default;
};

inline constexpr double kAtomMergeTolerance = 1e-12;
inline constexpr double kMassTolerance = 1e-9;
inline constexpr int kDefaultMaxMomentOrder = 64;

/// Nonnegative finite measure on the real line: atoms plus a piecewise-linear
/// density on an explicit grid (zero outside the grid).
///
/// Atoms are kept sorted with positions closer than kAtomMergeTolerance merged.
/// There is no constraint on the total mass, so the same type carries both
/// probability measures (through Measure) and the spectral measure of F - z.
class FiniteMeasure {
public:
    FiniteMeasure() = default;
    FiniteMeasure(std::vector<Atom> atoms, std::vector<double> grid, std::vector<double> values);

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }

    bool has_density() const noexcept { return grid_.size() >= 2; }
    bool is_atomic() const noexcept { return !has_density(); }
    bool is_zero() const noexcept;

    double atom_mass() const noexcept;
    double density_mass() const noexcept;
    double total_mass() const noexcept { return atom_mass() + density_mass(); }

    /// Smallest interval containing every atom and the density grid.
    std::pair<double, double> hull() const;

    /// Exact integral of x^k against the measure (the density is integrated as
    /// the piecewise-linear function it is).
    double moment(int k) const;
    double absolute_moment(double d) const;

    /// Mass of [lo, hi] (closed interval; atoms on the boundary are included).
    double mass_in(double lo, double hi) const;
    /// Mass of (-inf, x] and of (-inf, x).
    std::pair<double, double> cdf_at(double x) const;

    /// \int e^{itx} dmu(x).
    Complex fourier(double t) const;

    /// \int dmu(t) / (z - t) and its z-derivative. No half-plane check here.
    Jet cauchy_jet(Complex z) const;

    /// \int dmu(u) / ((u - x)^2 + y^2) for y > 0.
    double poisson_integral(double x, double y) const;

    FiniteMeasure dilated(double s) const;
    FiniteMeasure scaled_mass(double factor) const;

private:
    double density_integral(double lo, double hi) const;

    std::vector<Atom> atoms_;
    std::vector<double> grid_;
    std::vector<double> values_;
};

/// Borel probability measure: a FiniteMeasure whose total mass is one.
class Measure {
public:
    /// The point mass at zero.
    Measure();
    explicit Measure(FiniteMeasure parts);

    const FiniteMeasure& parts() const noexcept { return parts_; }
    const std::vector<Atom>& atoms() const noexcept { return parts_.atoms(); }
    const std::vector<double>& grid() const noexcept { return parts_.grid(); }
    const std::vector<double>& values() const noexcept { return parts_.values(); }
    bool is_atomic() const noexcept { return parts_.is_atomic(); }

    double mean() const { return parts_.moment(1); }
    double variance() const;

    friend bool operator==(const Measure& a, const Measure& b) {
        return a.atoms() == b.atoms() && a.grid() == b.grid() && a.values() == b.values();
    }

private:
    FiniteMeasure parts_;
};

struct MomentVector {
    std::vector<double> values;  // m_1 .. m_K
    // Optional low-order parts, m_k = values[k] + residuals[k]. Filled by
    // cumulants_to_moments so that the round trip does not lose the digits
    // that rounding large high-order moments to double would drop.
    std::vector<double> residuals;
    int order() const noexcept { return static_cast<int>(values.size()); }
};

Measure make_atomic(std::span<const Atom> atoms);
Measure make_atomic(std::initializer_list<Atom> atoms);
Measure make_measure(std::vector<Atom> atoms, std::vector<double> grid, std::vector<double> values);

/// Density-only measure. With normalize = true the values are rescaled to unit
/// mass; otherwise the mass must already be one.
Measure make_density(std::vector<double> grid, std::vector<double> values, bool normalize = true);

double moment(const Measure& m, int k, int max_order = kDefaultMaxMomentOrder);
double absolute_moment(const Measure& m, double d, int max_order = kDefaultMaxMomentOrder);

/// m_1..m_K, with the Hankel matrix [m_{i+j}] checked positive semidefinite.
MomentVector moment_vector(const Measure& m, int order, int max_order = kDefaultMaxMomentOrder);

/// Moves the mass outside [-N, N] to an atom at the origin.
Measure truncate(const Measure& m, double cutoff);
Complex characteristic_function(const Measure& m, double t);

/// Pushforward under x -> x / s.
Measure dilate(const Measure& m, double s);

/// Pushforward under x -> x + c.
Measure shift(const Measure& m, double c);

/// mu(R \ [-N, N]).
double tail_mass(const Measure& m, double cutoff);

}  // namespace freeconv
