#pragma once

#include <string>
#include <utility>

#include "freeconv/measure.hpp"
#include "freeconv/nc_combinatorics.hpp"

namespace freeconv {

enum class FamilyName { Semicircle, FreePoisson, MeixnerW };

std::string to_string(FamilyName name);
FamilyName family_name_from_string(const std::string& name);

/// Closed-form free infinitely divisible reference law.
///   Semicircle(mean, variance)
///   FreePoisson(rate)        jump size one
///   MeixnerW(a)              mean 0, variance 1, third moment a
struct FamilySpec {
    FamilyName name = FamilyName::Semicircle;
    double mean = 0.0;
    double variance = 1.0;
    double rate = 1.0;
    double a = 0.0;

    static FamilySpec semicircle(double mean = 0.0, double variance = 1.0);
    static FamilySpec free_poisson(double rate);
    static FamilySpec meixner(double a);

    void validate() const;
};

/// sqrt((z - lo)(z - hi)) on the branch asymptotic to z at infinity, analytic
/// off [lo, hi].
Complex edge_sqrt(Complex z, double lo, double hi);

/// G_{w_a}(z) = 1 / (a + (z - a + sqrt((z - a)^2 - 4)) / 2).
Complex meixner_cauchy(double a, Complex z);
Jet meixner_cauchy_jet(double a, Complex z);

Complex family_cauchy(const FamilySpec& f, Complex z);
Jet family_cauchy_jet(const FamilySpec& f, Complex z);

/// alpha_1..alpha_K in closed form.
CumulantVector family_cumulants(const FamilySpec& f, int order);

/// Interval carrying the absolutely continuous part (atoms may lie outside,
/// e.g. the free Poisson atom at 0 for rate < 1).
std::pair<double, double> family_support(const FamilySpec& f);

/// Standard semicircle density sqrt(4 - x^2) / (2 pi) sampled on `points`
/// Chebyshev-Lobatto nodes over [-2, 2], renormalized to unit mass.
Measure semicircle_grid_measure(int points = 2001);

}  // namespace freeconv
