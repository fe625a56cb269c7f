#include "freeconv/idlaws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "freeconv/error.hpp"

namespace freeconv {

std::string to_string(IdVerdict::Kind kind) {
    switch (kind) {
        case IdVerdict::Kind::PassesSampledCriterion: return "PassesSampledCriterion";
        case IdVerdict::Kind::FailsAt: return "FailsAt";
        case IdVerdict::Kind::ContinuationBroken: return "ContinuationBroken";
    }
    return "Unknown";
}

namespace {

IdVerdict verdict(IdVerdict::Kind kind, Complex where, const std::string& detail) {
    std::ostringstream msg;
    msg << detail << " at z = " << where.real() << (where.imag() < 0 ? " - " : " + ") << std::abs(where.imag())
        << "i";
    return IdVerdict{kind, where, msg.str()};
}

}  // namespace

IdVerdict is_free_id_sampled(const CauchyFunction& g, const IdCheckOptions& options) {
    const auto& depths = options.depth_grid;
    if (depths.empty()) throw Error(ErrorCode::InvalidArgument, "empty depth grid");
    for (std::size_t i = 1; i < depths.size(); ++i) {
        if (!(depths[i] < depths[i - 1])) throw Error(ErrorCode::InvalidArgument, "depth grid must decrease");
    }
    if (depths.back() < 0.05) throw Error(ErrorCode::InvalidArgument, "smallest depth must be >= 0.05");
    if (options.x_points < 2 || !(options.width > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "need width > 0 and at least two vertical lines");
    }
    using Kind = IdVerdict::Kind;
    const double y_max = depths.front();

    const Complex top(0.0, y_max);
    const auto top_inv = invert_reciprocal(g, top, top, options.newton);
    if (!top_inv) return verdict(Kind::ContinuationBroken, top, "Newton inversion failed at the top");
    if (std::abs(top_inv->w - top) / y_max >= options.growth_limit) {
        return verdict(Kind::FailsAt, top, "phi(iy)/y is not small");
    }

    const auto xs = linspace(-options.width, options.width, options.x_points);
    // phi on the depth grid, per line; empty once a line has left the sampled region.
    std::vector<std::vector<std::optional<Complex>>> sampled(
        xs.size(), std::vector<std::optional<Complex>>(depths.size()));

    for (std::size_t line = 0; line < xs.size(); ++line) {
        const double x = xs[line];
        double y = y_max;
        Complex z(x, y);
        auto inv = invert_reciprocal(g, z, z, options.newton);
        if (!inv) return verdict(Kind::ContinuationBroken, z, "Newton inversion failed");
        Complex w = inv->w;
        Complex phi = w - z;
        if (phi.imag() > options.im_tolerance) return verdict(Kind::FailsAt, z, "Im phi > 0");
        sampled[line][0] = phi;

        std::size_t next_depth = 1;
        while (next_depth < depths.size()) {
            const double step = std::max(options.substep, 0.1 * y);
            const double y_next = std::max(y - step, depths[next_depth]);
            const Complex z_next(x, y_next);
            const auto next = invert_reciprocal(g, z_next, w, options.newton);
            if (!next) {
                if (w.imag() < 0.25 * y) break;  // preimage was heading to the real axis
                return verdict(Kind::ContinuationBroken, z_next, "Newton continuation failed");
            }
            const Complex phi_next = next->w - z_next;
            if (std::abs(phi_next - phi) > options.jump_limit) {
                return verdict(Kind::ContinuationBroken, z_next, "phi jumps along the line");
            }
            if (phi_next.imag() > options.im_tolerance) return verdict(Kind::FailsAt, z_next, "Im phi > 0");
            y = y_next;
            z = z_next;
            w = next->w;
            phi = phi_next;
            if (y == depths[next_depth]) {
                sampled[line][next_depth] = phi;
                ++next_depth;
            }
            if (w.imag() < options.exit_fraction * y) break;
        }
    }

    for (std::size_t d = 0; d < depths.size(); ++d) {
        for (std::size_t line = 1; line < xs.size(); ++line) {
            const auto& left = sampled[line - 1][d];
            const auto& right = sampled[line][d];
            if (left && right && std::abs(*right - *left) > options.jump_limit) {
                return verdict(Kind::ContinuationBroken, Complex(xs[line], depths[d]),
                               "phi jumps between neighbouring lines");
            }
        }
    }
    return IdVerdict{Kind::PassesSampledCriterion, Complex(0.0, 0.0), "all sampled continuations consistent"};
}

IdVerdict is_free_id_sampled(const Law& law, const IdCheckOptions& options) {
    return is_free_id_sampled(law.as_function(), options);
}

Measure family_grid_measure(const FamilySpec& f, double lo, double hi, int points,
                            const std::vector<double>& eta_schedule) {
    if (eta_schedule.size() < 2) throw Error(ErrorCode::ScheduleTooShort, "eta schedule needs two levels");
    const double eta1 = eta_schedule[eta_schedule.size() - 2];
    const double eta2 = eta_schedule.back();
    auto grid = linspace(lo, hi, points);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d1 = -family_cauchy(f, Complex(grid[i], eta1)).imag() / std::numbers::pi;
        const double d2 = -family_cauchy(f, Complex(grid[i], eta2)).imag() / std::numbers::pi;
        values[i] = std::max(0.0, (eta1 * d2 - eta2 * d1) / (eta1 - eta2));
    }
    return make_density(std::move(grid), std::move(values), true);
}

}  // namespace freeconv
