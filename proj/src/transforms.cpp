#include "freeconv/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "freeconv/error.hpp"
#include "freeconv/nc_combinatorics.hpp"

namespace freeconv {

HalfPlanePoint::HalfPlanePoint(Complex z) : z_(z) {
    if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::NotUpperHalfPlane,
                    "point (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ") is not in C+");
    }
}

Law::Law(Measure m) : source_(std::move(m)) {}

Law::Law(FamilySpec f) : source_(f) { f.validate(); }

Law Law::dilated(double s) const {
    if (!(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "dilation factor must be positive");
    if (const auto* m = measure()) return Law(dilate(*m, s));
    Law out = *this;
    out.scale_ *= s;
    return out;
}

Jet Law::cauchy_jet(Complex z) const {
    if (!(z.imag() > 0.0)) throw Error(ErrorCode::NotUpperHalfPlane, "Im z must be positive");
    if (const auto* m = measure()) return m->parts().cauchy_jet(z);
    // G_s(z) = s G(s z) for the pushforward under x -> x / s.
    const Jet base = family_cauchy_jet(*family(), scale_ * z);
    return {scale_ * base.value, scale_ * scale_ * base.derivative};
}

CauchyFunction Law::as_function() const {
    return [law = *this](Complex z) { return law.cauchy_jet(z); };
}

double Law::moment(int k) const {
    if (k < 0) throw Error(ErrorCode::InvalidArgument, "moment order must be nonnegative");
    if (const auto* m = measure()) return freeconv::moment(*m, k);
    if (k == 0) return 1.0;
    if (k > kMaxRecursionOrder) {
        throw Error(ErrorCode::OrderTooLarge, "closed-form moments limited to order " +
                                                  std::to_string(kMaxRecursionOrder));
    }
    const auto moments = cumulants_to_moments(family_cumulants(*family(), k));
    return moments.values[k - 1] / std::pow(scale_, k);
}

std::pair<double, double> Law::hull() const {
    if (const auto* m = measure()) return m->parts().hull();
    const FamilySpec& f = *family();
    auto [lo, hi] = family_support(f);
    if (f.name == FamilyName::FreePoisson && f.rate < 1.0) lo = std::min(lo, 0.0);
    if (f.name == FamilyName::MeixnerW && std::abs(f.a) > 1.0) {
        lo = std::min(lo, -1.0 / f.a);
        hi = std::max(hi, -1.0 / f.a);
    }
    return {lo / scale_, hi / scale_};
}

bool Law::is_point_mass() const noexcept {
    const auto* m = measure();
    return m != nullptr && m->is_atomic() && m->atoms().size() == 1;
}

Complex cauchy(const Law& law, HalfPlanePoint z) { return law.cauchy(z); }

Jet reciprocal_jet(const CauchyFunction& g, Complex z) {
    const Jet jet = g(z);
    if (jet.value == 0.0) throw Error(ErrorCode::CauchyVanishes, "Cauchy transform vanished");
    const Complex f = 1.0 / jet.value;
    return {f, -jet.derivative * f * f};
}

Complex reciprocal_cauchy(const Law& law, HalfPlanePoint z) {
    const Complex g = law.cauchy(z);
    if (g == 0.0) throw Error(ErrorCode::CauchyVanishes, "Cauchy transform vanished");
    const Complex f = 1.0 / g;
    if (f.imag() < z.im() - 1e-10 * std::max(1.0, std::abs(f))) {
        throw Error(ErrorCode::EvaluatorFailed, "Im F(z) < Im z");
    }
    return f;
}

double c1_index(const Law& law) { return (1.0 / law.cauchy(Complex(0.0, 1.0))).imag() - 1.0; }

std::optional<InverseResult> invert_reciprocal(const CauchyFunction& g, Complex z, Complex seed,
                                               const NewtonOptions& options) {
    Complex w = seed;
    if (!(w.imag() > 0.0)) w = Complex(w.real(), std::max(z.imag(), 1e-3));
    Jet f;
    try {
        f = reciprocal_jet(g, w);
    } catch (const Error&) {
        return std::nullopt;
    }
    double residual = std::abs(f.value - z);
    for (int it = 0; it < options.max_iterations; ++it) {
        if (residual < options.tol) return InverseResult{w, it, residual};
        if (f.derivative == 0.0) return std::nullopt;
        const Complex step = (f.value - z) / f.derivative;
        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving, lambda *= 0.5) {
            const Complex trial = w - lambda * step;
            if (!(trial.imag() > 0.0)) continue;
            Jet ft;
            try {
                ft = reciprocal_jet(g, trial);
            } catch (const Error&) {
                continue;
            }
            const double r = std::abs(ft.value - z);
            if (r < residual || !std::isfinite(residual)) {
                w = trial;
                f = ft;
                residual = r;
                accepted = true;
                break;
            }
        }
        if (!accepted) return std::nullopt;
    }
    if (residual < options.tol) return InverseResult{w, options.max_iterations, residual};
    return std::nullopt;
}

Complex voiculescu(const CauchyFunction& g, HalfPlanePoint z, const NewtonOptions& options) {
    const auto inv = invert_reciprocal(g, z, z, options);
    if (!inv || !(inv->w.imag() > 0.0)) {
        throw Error(ErrorCode::InversionDiverged,
                    "Newton inversion of F did not converge at (" + std::to_string(z.re()) + ", " +
                        std::to_string(z.im()) + ")");
    }
    return inv->w - z.value();
}

Complex voiculescu(const Law& law, HalfPlanePoint z, const NewtonOptions& options) {
    return voiculescu(law.as_function(), z, options);
}

namespace {

FiniteMeasure atomic_sigma(const Measure& m) {
    const auto& atoms = m.atoms();
    auto g_real = [&](double x) {
        double s = 0.0;
        for (const auto& a : atoms) s += a.weight / (x - a.position);
        return s;
    };
    std::vector<Atom> out;
    for (std::size_t i = 1; i < atoms.size(); ++i) {
        // G decreases from +inf to -inf between consecutive atoms.
        double lo = atoms[i - 1].position, hi = atoms[i].position;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (g_real(mid) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double u = 0.5 * (lo + hi);
        double dg = 0.0;
        for (const auto& a : atoms) dg += a.weight / ((u - a.position) * (u - a.position));
        out.push_back(Atom{u, 1.0 / dg});
    }
    return FiniteMeasure(std::move(out), {}, {});
}

}  // namespace

FiniteMeasure nevanlinna_sigma(const Measure& m, const SigmaOptions& options) {
    if (std::abs(m.mean()) > kMassTolerance) {
        throw Error(ErrorCode::NotCentered, "mean is " + std::to_string(m.mean()));
    }
    if (m.is_atomic()) return atomic_sigma(m);
    if (options.eta_schedule.size() < 2) throw Error(ErrorCode::ScheduleTooShort, "need two eta levels");
    if (options.points < 2) throw Error(ErrorCode::InvalidArgument, "need at least two sigma grid points");

    // Density of sigma is -Im(z - F(z)) / pi = (Im F(x + i eta) - eta) / pi,
    // extrapolated linearly to eta = 0 from the last two levels.
    const auto [lo, hi] = m.parts().hull();
    const double eta1 = options.eta_schedule[options.eta_schedule.size() - 2];
    const double eta2 = options.eta_schedule.back();
    std::vector<double> grid(static_cast<std::size_t>(options.points));
    std::vector<double> values(grid.size());
    for (int i = 0; i < options.points; ++i) {
        const double x = lo + (hi - lo) * i / (options.points - 1);
        grid[i] = x;
        auto density = [&](double eta) {
            const Complex f = 1.0 / m.parts().cauchy_jet(Complex(x, eta)).value;
            return (f.imag() - eta) / std::numbers::pi;
        };
        const double d1 = density(eta1), d2 = density(eta2);
        values[i] = std::max(0.0, (eta1 * d2 - eta2 * d1) / (eta1 - eta2));
    }
    grid.back() = hi;
    return FiniteMeasure({}, std::move(grid), std::move(values));
}

}  // namespace freeconv
