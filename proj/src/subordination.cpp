#include "freeconv/subordination.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "freeconv/error.hpp"

namespace freeconv {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_order(int n) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "convolution power must be >= 1");
}

// Numerically converged: either the requested tolerance is met or the update is
// at rounding level and the residual sits at the floating-point floor for n.
bool converged(double residual, double tol, double scale, double step, double n) {
    if (residual <= tol * scale) return true;
    return step <= 8.0 * kEps * scale && residual <= 64.0 * n * kEps * scale;
}

}  // namespace

SubordinationResult solve_Zn(const CauchyFunction& g, int n, Complex z, const SolverOptions& options) {
    require_order(n);
    if (!(z.imag() > 0.0)) throw Error(ErrorCode::NotUpperHalfPlane, "Im z must be positive");
    if (n == 1) return {z, z, 0, 0.0};

    const double nn = n;
    const double keep = 1.0 - 1.0 / nn;
    Complex w = z + Complex(0.0, 1.0);
    Jet f = reciprocal_jet(g, w);
    auto residual_of = [&](Complex at, Complex fv) { return std::abs(z - nn * at + (nn - 1.0) * fv); };
    double residual = residual_of(w, f.value);
    double last_step = std::numeric_limits<double>::infinity();

    bool damped = options.damping == Damping::Always;
    std::array<double, 5> history{};
    int fixed_steps = 0;

    for (int it = 0; it < options.max_iterations; ++it) {
        const double scale = std::max(1.0, std::abs(w));
        if (converged(residual, options.tol, scale, last_step, nn)) {
            if (options.lower_bound_from_n && n >= *options.lower_bound_from_n) {
                const double c1 = (1.0 / g(Complex(0.0, 1.0)).value).imag() - 1.0;
                const double bound = 0.25 * std::sqrt(std::max(0.0, c1) * (nn - 1.0)) - 1e-8;
                if (std::abs(w) < bound) {
                    throw Error(ErrorCode::EvaluatorFailed, "|Z_n| below the lower bound sqrt(c1 (n-1)) / 4", w);
                }
            }
            return {z, w, it, residual};
        }

        if (options.newton) {
            const Complex slope = nn - (nn - 1.0) * f.derivative;
            if (slope != 0.0) {
                const Complex delta = (nn * w - (nn - 1.0) * f.value - z) / slope;
                const Complex trial = w - delta;
                if (trial.imag() > 0.0 && std::isfinite(trial.real()) && std::isfinite(trial.imag())) {
                    const Jet ft = reciprocal_jet(g, trial);
                    const double r = residual_of(trial, ft.value);
                    if (r < residual) {
                        last_step = std::abs(delta);
                        w = trial;
                        f = ft;
                        residual = r;
                        continue;
                    }
                }
            }
        }

        // w <- z / n + (1 - 1/n) F(w) maps C+ into itself with
        // Im T(w) >= Im z / n + (1 - 1/n) Im w.
        const Complex t = z / nn + keep * f.value;
        const double floor = z.imag() / nn + keep * w.imag();
        if (t.imag() < floor - 1e-12 * std::max(1.0, std::abs(t))) {
            throw Error(ErrorCode::EvaluatorFailed, "fixed-point map left the half-plane bound", w);
        }
        const Complex next = damped ? 0.5 * (w + t) : t;
        last_step = std::abs(next - w);

        history[fixed_steps % history.size()] = last_step;
        ++fixed_steps;
        if (options.damping == Damping::Auto && !damped && fixed_steps > 4) {
            const double four_back = history[(fixed_steps - 5) % history.size()];
            if (last_step >= four_back) damped = true;
        }

        w = next;
        f = reciprocal_jet(g, w);
        residual = residual_of(w, f.value);
    }
    throw Error(ErrorCode::FixedPointDiverged,
                "subordination iteration did not converge in " + std::to_string(options.max_iterations) +
                    " iterations (residual " + std::to_string(residual) + ")",
                w);
}

SubordinationResult solve_Zn(const Law& law, int n, HalfPlanePoint z, const SolverOptions& options) {
    return solve_Zn(law.as_function(), n, z.value(), options);
}

Complex power_cauchy(const Law& law, int n, HalfPlanePoint z, const SolverOptions& options) {
    const auto result = solve_Zn(law, n, z, options);
    return law.cauchy(result.Zn);
}

CauchyFunction free_power(CauchyFunction g, int n, const SolverOptions& options) {
    require_order(n);
    return [g = std::move(g), n, options](Complex z) -> Jet {
        const auto result = solve_Zn(g, n, z, options);
        const Jet inner = g(result.Zn);
        if (n == 1) return inner;
        // Z_n' = 1 / (n - (n - 1) F'(Z_n)).
        const Complex f = 1.0 / inner.value;
        const Complex df = -inner.derivative * f * f;
        const Complex dz = 1.0 / (double(n) - double(n - 1) * df);
        return {inner.value, inner.derivative * dz};
    };
}

CauchyFunction free_power(const Law& law, int n, const SolverOptions& options) {
    return free_power(law.as_function(), n, options);
}

PairResult solve_pair(const CauchyFunction& g1, const CauchyFunction& g2, Complex z, const SolverOptions& options) {
    if (!(z.imag() > 0.0)) throw Error(ErrorCode::NotUpperHalfPlane, "Im z must be positive");
    Complex z1 = z + Complex(0.0, 1.0);
    Complex z2 = z1;
    Jet f1 = reciprocal_jet(g1, z1);
    Jet f2 = reciprocal_jet(g2, z2);
    auto residual_of = [&](Complex a, Complex b, Complex fa, Complex fb) {
        return std::max(std::abs(z - a - b + fa), std::abs(fa - fb));
    };
    double residual = residual_of(z1, z2, f1.value, f2.value);
    double last_step = std::numeric_limits<double>::infinity();
    bool damped = options.damping == Damping::Always;
    std::array<double, 5> history{};
    int fixed_steps = 0;

    for (int it = 0; it < options.max_iterations; ++it) {
        const double scale = std::max({1.0, std::abs(z1), std::abs(z2)});
        if (converged(residual, options.tol, scale, last_step, 2.0)) return {z1, z2, it, residual};

        if (options.newton) {
            // r1 = Z1 - z - h2(Z2), r2 = Z2 - z - h1(Z1) with h = F - id.
            const Complex r1 = z1 - z - (f2.value - z2);
            const Complex r2 = z2 - z - (f1.value - z1);
            const Complex h1 = f1.derivative - 1.0;
            const Complex h2 = f2.derivative - 1.0;
            const Complex det = 1.0 - h1 * h2;
            if (det != 0.0) {
                const Complex d1 = (r1 + h2 * r2) / det;
                const Complex d2 = r2 + h1 * d1;
                const Complex t1 = z1 - d1, t2 = z2 - d2;
                if (t1.imag() > 0.0 && t2.imag() > 0.0) {
                    const Jet ft1 = reciprocal_jet(g1, t1);
                    const Jet ft2 = reciprocal_jet(g2, t2);
                    const double r = residual_of(t1, t2, ft1.value, ft2.value);
                    if (r < residual) {
                        last_step = std::max(std::abs(d1), std::abs(d2));
                        z1 = t1;
                        z2 = t2;
                        f1 = ft1;
                        f2 = ft2;
                        residual = r;
                        continue;
                    }
                }
            }
        }

        // Alternating updates Z1 <- z - Z2 + F2(Z2), Z2 <- z - Z1 + F1(Z1).
        Complex n1 = z - z2 + f2.value;
        if (damped) n1 = 0.5 * (z1 + n1);
        const Jet fn1 = reciprocal_jet(g1, n1);
        Complex n2 = z - n1 + fn1.value;
        if (damped) n2 = 0.5 * (z2 + n2);
        last_step = std::max(std::abs(n1 - z1), std::abs(n2 - z2));

        history[fixed_steps % history.size()] = last_step;
        ++fixed_steps;
        if (options.damping == Damping::Auto && !damped && fixed_steps > 4) {
            if (last_step >= history[(fixed_steps - 5) % history.size()]) damped = true;
        }

        z1 = n1;
        z2 = n2;
        f1 = fn1;
        f2 = reciprocal_jet(g2, z2);
        residual = residual_of(z1, z2, f1.value, f2.value);
    }
    throw Error(ErrorCode::FixedPointDiverged,
                "pair subordination did not converge in " + std::to_string(options.max_iterations) + " iterations",
                z1);
}

PairResult solve_pair(const Law& m1, const Law& m2, HalfPlanePoint z, const SolverOptions& options) {
    return solve_pair(m1.as_function(), m2.as_function(), z.value(), options);
}

CauchyFunction free_convolution(CauchyFunction g1, CauchyFunction g2, const SolverOptions& options) {
    return [g1 = std::move(g1), g2 = std::move(g2), options](Complex z) -> Jet {
        const auto pair = solve_pair(g1, g2, z, options);
        const Jet inner = g1(pair.Z1);
        const Jet f1 = reciprocal_jet(g1, pair.Z1);
        const Jet f2 = reciprocal_jet(g2, pair.Z2);
        // Z1' = F2' / (F2' (1 - F1') + F1').
        const Complex denom = f2.derivative * (1.0 - f1.derivative) + f1.derivative;
        const Complex dz1 = denom == 0.0 ? Complex(1.0) : f2.derivative / denom;
        return {inner.value, inner.derivative * dz1};
    };
}

Complex inverse_Zn(const Law& law, int n, HalfPlanePoint z) {
    require_order(n);
    return double(n) * z.value() - double(n - 1) * reciprocal_cauchy(law, z);
}

double boundary_curve(const FiniteMeasure& sigma, int n, double x) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "boundary curve needs n >= 2");
    if (sigma.is_zero()) return 0.0;
    const double weight = n - 1.0;
    auto excess = [&](double y) { return weight * sigma.poisson_integral(x, y) - 1.0; };

    const double hi_start = std::sqrt(sigma.total_mass() * weight);
    const auto [lo_hull, hi_hull] = sigma.hull();
    const double tiny = 1e-13 * (1.0 + std::abs(x) + (hi_hull - lo_hull));
    if (excess(tiny) <= 0.0) return 0.0;
    double lo = tiny, hi = hi_start;
    if (excess(hi) > 0.0) return hi;  // not reachable for a finite sigma, the integral is <= mass / y^2
    while (hi - lo > 1e-11) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double boundary_curve(const Measure& m, int n, double x) { return boundary_curve(nevanlinna_sigma(m), n, x); }

}  // namespace freeconv
