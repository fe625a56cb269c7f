#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "freeconv/families.hpp"
#include "freeconv/measure.hpp"

namespace freeconv {

/// A point of the open upper half-plane.
class HalfPlanePoint {
public:
    HalfPlanePoint(Complex z);  // NOLINT: implicit on purpose, validates Im z > 0
    HalfPlanePoint(double re, double im) : HalfPlanePoint(Complex(re, im)) {}

    double re() const noexcept { return z_.real(); }
    double im() const noexcept { return z_.imag(); }
    Complex value() const noexcept { return z_; }
    operator Complex() const noexcept { return z_; }  // NOLINT

private:
    Complex z_;
};

/// z -> (G(z), G'(z)) on the upper half-plane.
using CauchyFunction = std::function<Jet(Complex)>;

/// A probability law with a computable Cauchy transform: either an explicit
/// Measure or a closed-form family, optionally pushed forward by x -> x / scale.
class Law {
public:
    Law(Measure m);     // NOLINT
    Law(FamilySpec f);  // NOLINT

    const Measure* measure() const noexcept { return std::get_if<Measure>(&source_); }
    const FamilySpec* family() const noexcept { return std::get_if<FamilySpec>(&source_); }
    double scale() const noexcept { return scale_; }

    /// Pushforward under x -> x / s.
    Law dilated(double s) const;

    Jet cauchy_jet(Complex z) const;
    Complex cauchy(Complex z) const { return cauchy_jet(z).value; }
    CauchyFunction as_function() const;

    /// Raw moment of order k (k <= 32 for closed-form families).
    double moment(int k) const;

    /// Interval holding all of the mass.
    std::pair<double, double> hull() const;

    bool is_point_mass() const noexcept;

private:
    std::variant<Measure, FamilySpec> source_;
    double scale_ = 1.0;
};

/// G(z) = \int dmu(t) / (z - t).
Complex cauchy(const Law& law, HalfPlanePoint z);

/// F(z) = 1 / G(z); Im F(z) >= Im z is checked on every call.
Complex reciprocal_cauchy(const Law& law, HalfPlanePoint z);
Jet reciprocal_jet(const CauchyFunction& g, Complex z);

/// Im F(i) - 1; zero exactly for point masses.
double c1_index(const Law& law);

struct NewtonOptions {
    double tol = 1e-10;
    int max_iterations = 200;
};

struct InverseResult {
    Complex w;  // F(w) = z
    int iterations = 0;
    double residual = 0.0;
};

/// Solves F(w) = z by damped Newton from `seed`, staying inside the upper
/// half-plane. Returns nullopt on divergence.
std::optional<InverseResult> invert_reciprocal(const CauchyFunction& g, Complex z, Complex seed,
                                               const NewtonOptions& options = {});

/// phi(z) = F^{-1}(z) - z. Throws InversionDiverged outside the region where
/// Newton from w = z converges.
Complex voiculescu(const Law& law, HalfPlanePoint z, const NewtonOptions& options = {});
Complex voiculescu(const CauchyFunction& g, HalfPlanePoint z, const NewtonOptions& options = {});

struct SigmaOptions {
    int points = 2001;
    std::vector<double> eta_schedule{0.04, 0.02, 0.01};
};

/// Finite measure sigma with F(z) = z + \int sigma(du) / (u - z), for centered
/// mu with finite variance; sigma(R) = m_2. Exact for purely atomic mu (atoms
/// at the zeros of G with weights -1 / G'), recovered by Stieltjes inversion of
/// z - F(z) otherwise.
FiniteMeasure nevanlinna_sigma(const Measure& m, const SigmaOptions& options = {});

}  // namespace freeconv
