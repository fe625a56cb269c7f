#pragma once

#include <string>
#include <vector>

#include "freeconv/families.hpp"
#include "freeconv/inversion.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv {

/// Outcome of the sampled free infinite divisibility test. Passing is evidence
/// on a finite sample of C+, not a proof.
struct IdVerdict {
    enum class Kind { PassesSampledCriterion, FailsAt, ContinuationBroken };

    Kind kind = Kind::PassesSampledCriterion;
    Complex where{0.0, 0.0};
    std::string detail;

    bool passes() const noexcept { return kind == Kind::PassesSampledCriterion; }
};

std::string to_string(IdVerdict::Kind kind);

struct IdCheckOptions {
    std::vector<double> depth_grid{200.0, 50.0, 10.0, 5.0, 2.0, 1.0, 0.5, 0.2, 0.1, 0.05};
    double width = 4.0;
    int x_points = 81;           // vertical lines over [-width, width]
    double substep = 0.025;      // continuation step in Im z near the axis
    double jump_limit = 0.5;     // |delta phi| between neighbouring samples
    double im_tolerance = 1e-6;  // allowed Im phi
    double growth_limit = 0.01;  // |phi(i y_max)| / y_max
    // Lines stop without failing once the preimage F^{-1}(z) drops to this
    // fraction of Im z: F is only available on C+, so the continuation of phi
    // cannot be followed past that point.
    double exit_fraction = 0.05;
    NewtonOptions newton{};
};

/// Continues phi = F^{-1} - id down vertical lines from Im z = y_max and checks
/// that every continuation converges, Im phi <= tolerance everywhere sampled,
/// neighbouring values stay close, and phi(iy) / y is small at the top.
IdVerdict is_free_id_sampled(const CauchyFunction& g, const IdCheckOptions& options = {});
IdVerdict is_free_id_sampled(const Law& law, const IdCheckOptions& options = {});

/// Grid measure for a closed-form family, obtained by Stieltjes inversion of
/// its Cauchy transform: density -Im G(x + i eta) / pi extrapolated to eta = 0
/// at each node, clipped at zero and renormalized. Atoms are not represented.
Measure family_grid_measure(const FamilySpec& f, double lo, double hi, int points,
                            const std::vector<double>& eta_schedule = {0.004, 0.002});

}  // namespace freeconv
