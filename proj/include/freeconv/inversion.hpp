#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "freeconv/measure.hpp"

namespace freeconv {

/// Sampled distribution function. values[i] = mu((-inf, xs[i]]) and
/// left_limits[i] = mu((-inf, xs[i])). Between nodes the table interpolates
/// linearly from values[i] to left_limits[i + 1]; outside it is constant.
struct CdfTable {
    std::vector<double> xs;
    std::vector<double> values;
    std::vector<double> left_limits;
    double eta_used = 0.0;          // 0 for exact tables
    bool mass_warning = false;      // total-mass deficit above the warning level

    /// Throws InvalidArgument unless sorted, in range and monotone.
    void validate() const;

    /// (value, left limit) at x.
    std::pair<double, double> at(double x) const;
};

struct DistanceReport {
    double distance = 0.0;
    double argmax_x = 0.0;
    std::string method;
};

struct InversionOptions {
    std::vector<double> eta_schedule{0.04, 0.02, 0.01};
    double atom_cell_mass = 0.05;   // cells carrying more than this are refined
    int atom_refinement = 8;
    int max_subdivision = 64;       // cap on sub-cells per grid cell
    double mass_warning_level = 2e-2;
};

/// Stieltjes-Perron inversion: cell masses are trapezoid integrals of
/// -Im G(x + i eta) / pi at each of the last two eta levels, extrapolated
/// linearly to eta = 0, accumulated, clipped to [0, 1] and made monotone.
CdfTable stieltjes_cdf(const std::function<Complex(Complex)>& g, std::span<const double> xs,
                       const InversionOptions& options = {});

/// Sup over the merged node set of both one-sided differences.
DistanceReport kolmogorov(const CdfTable& a, const CdfTable& b);

/// Exact distribution function on the union of atom positions and grid nodes.
CdfTable measure_to_cdf(const Measure& m);

struct TailSmoothingCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// mu(|x| > 2/u) against (2/u) \int_0^u (1 - Re phi(t)) dt.
TailSmoothingCheck tail_smoothing_check(const Measure& m, double u);

/// Equispaced grid with `points` nodes, endpoints exact.
std::vector<double> linspace(double lo, double hi, int points);

/// CSV with header "x,cdf,cdf_left".
void write_cdf_csv(std::ostream& out, const CdfTable& table);
CdfTable read_cdf_csv(std::istream& in);

}  // namespace freeconv
