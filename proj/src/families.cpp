#include "freeconv/families.hpp"

#include <cmath>
#include <numbers>

#include "freeconv/error.hpp"

namespace freeconv {
namespace {

void require_upper(Complex z) {
    if (!(z.imag() > 0.0)) {
        throw Error(ErrorCode::NotUpperHalfPlane, "Im z must be positive");
    }
}

Jet semicircle_standard_jet(Complex z) {
    const Complex s = edge_sqrt(z, -2.0, 2.0);
    // (z - s) / 2 written as 2 / (z + s) to avoid cancellation for large |z|.
    const Complex g = 2.0 / (z + s);
    return {g, -g / s};
}

}  // namespace

std::string to_string(FamilyName name) {
    switch (name) {
        case FamilyName::Semicircle: return "semicircle";
        case FamilyName::FreePoisson: return "free_poisson";
        case FamilyName::MeixnerW: return "meixner_w";
    }
    return "unknown";
}

FamilyName family_name_from_string(const std::string& name) {
    if (name == "semicircle") return FamilyName::Semicircle;
    if (name == "free_poisson") return FamilyName::FreePoisson;
    if (name == "meixner_w") return FamilyName::MeixnerW;
    throw Error(ErrorCode::ParseError, "unknown family '" + name + "'");
}

FamilySpec FamilySpec::semicircle(double mean, double variance) {
    FamilySpec f;
    f.name = FamilyName::Semicircle;
    f.mean = mean;
    f.variance = variance;
    f.validate();
    return f;
}

FamilySpec FamilySpec::free_poisson(double rate) {
    FamilySpec f;
    f.name = FamilyName::FreePoisson;
    f.rate = rate;
    f.validate();
    return f;
}

FamilySpec FamilySpec::meixner(double a) {
    FamilySpec f;
    f.name = FamilyName::MeixnerW;
    f.a = a;
    f.validate();
    return f;
}

void FamilySpec::validate() const {
    switch (name) {
        case FamilyName::Semicircle:
            if (!std::isfinite(mean) || !(variance > 0.0) || !std::isfinite(variance)) {
                throw Error(ErrorCode::InvalidArgument, "semicircle needs finite mean and variance > 0");
            }
            break;
        case FamilyName::FreePoisson:
            if (!(rate > 0.0) || !std::isfinite(rate)) {
                throw Error(ErrorCode::InvalidArgument, "free Poisson rate must be > 0");
            }
            break;
        case FamilyName::MeixnerW:
            if (!std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "Meixner parameter must be finite");
            break;
    }
}

Complex edge_sqrt(Complex z, double lo, double hi) {
    // Product of principal roots: each factor has argument in (-pi/2, pi/2], the
    // cut of the product is exactly [lo, hi] and it behaves like z at infinity.
    return std::sqrt(z - lo) * std::sqrt(z - hi);
}

Jet meixner_cauchy_jet(double a, Complex z) {
    require_upper(z);
    const Complex s = edge_sqrt(z, a - 2.0, a + 2.0);
    const Complex f = a + 0.5 * (z - a + s);
    const Complex df = 0.5 * (1.0 + (z - a) / s);
    if (f.imag() < z.imag() - 1e-10) {
        throw Error(ErrorCode::EvaluatorFailed, "Meixner square-root branch violates Im F >= Im z");
    }
    const Complex g = 1.0 / f;
    return {g, -df * g * g};
}

Complex meixner_cauchy(double a, Complex z) { return meixner_cauchy_jet(a, z).value; }

Jet family_cauchy_jet(const FamilySpec& f, Complex z) {
    require_upper(z);
    switch (f.name) {
        case FamilyName::Semicircle: {
            const double sigma = std::sqrt(f.variance);
            const Jet std_jet = semicircle_standard_jet((z - f.mean) / sigma);
            return {std_jet.value / sigma, std_jet.derivative / (sigma * sigma)};
        }
        case FamilyName::FreePoisson: {
            const double lam = f.rate;
            const double root = std::sqrt(lam);
            const Complex s = edge_sqrt(z, (1.0 - root) * (1.0 - root), (1.0 + root) * (1.0 + root));
            const Complex ds = (z - 1.0 - lam) / s;
            const Complex g = 2.0 / (z + 1.0 - lam + s);
            return {g, -0.5 * g * g * (1.0 + ds)};
        }
        case FamilyName::MeixnerW:
            return meixner_cauchy_jet(f.a, z);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown family");
}

Complex family_cauchy(const FamilySpec& f, Complex z) { return family_cauchy_jet(f, z).value; }

CumulantVector family_cumulants(const FamilySpec& f, int order) {
    std::vector<double> alpha(static_cast<std::size_t>(order), 0.0);
    switch (f.name) {
        case FamilyName::Semicircle:
            if (order >= 1) alpha[0] = f.mean;
            if (order >= 2) alpha[1] = f.variance;
            break;
        case FamilyName::FreePoisson:
            std::fill(alpha.begin(), alpha.end(), f.rate);
            break;
        case FamilyName::MeixnerW:
            // phi_{w_a}(z) = 1 / (z - a): alpha_1 = 0 and alpha_k = a^{k-2} for k >= 2.
            for (int k = 2; k <= order; ++k) alpha[k - 1] = std::pow(f.a, k - 2);
            break;
    }
    return CumulantVector{std::move(alpha)};
}

std::pair<double, double> family_support(const FamilySpec& f) {
    switch (f.name) {
        case FamilyName::Semicircle: {
            const double r = 2.0 * std::sqrt(f.variance);
            return {f.mean - r, f.mean + r};
        }
        case FamilyName::FreePoisson: {
            const double root = std::sqrt(f.rate);
            return {(1.0 - root) * (1.0 - root), (1.0 + root) * (1.0 + root)};
        }
        case FamilyName::MeixnerW:
            return {f.a - 2.0, f.a + 2.0};
    }
    return {0.0, 0.0};
}

Measure semicircle_grid_measure(int points) {
    if (points < 3) throw Error(ErrorCode::InvalidArgument, "need at least 3 grid points");
    std::vector<double> grid(static_cast<std::size_t>(points)), values(static_cast<std::size_t>(points));
    // Chebyshev-Lobatto nodes x = -2 cos(theta): in theta the density 2 sin(theta)
    // is smooth, so the square-root edges are resolved.
    for (int i = 0; i < points; ++i) {
        const double theta = std::numbers::pi * i / (points - 1);
        grid[i] = -2.0 * std::cos(theta);
        values[i] = std::sin(theta) / std::numbers::pi;
    }
    values.front() = 0.0;
    values.back() = 0.0;
    grid.front() = -2.0;
    grid.back() = 2.0;
    return make_density(std::move(grid), std::move(values), true);
}

}  // namespace freeconv
