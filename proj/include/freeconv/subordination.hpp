#pragma once

#include <optional>

#include "freeconv/transforms.hpp"

namespace freeconv {

enum class Damping {
    Auto,    // plain iteration, switch to 0.5-damping when steps stop shrinking
    None,
    Always,
};

struct SolverOptions {
    double tol = 1e-12;
    int max_iterations = 10000;
    Damping damping = Damping::Auto;
    // Newton steps on the defining equation, accepted only when they stay in C+
    // and reduce the residual. Off means pure fixed-point iteration.
    bool newton = true;
    // When set, check |Z_n| >= sqrt(c_1 (n - 1)) / 4 for n at or above this value.
    std::optional<int> lower_bound_from_n;
};

/// z = n Z_n(z) - (n - 1) F(Z_n(z)), Z_n a self-map of C+.
struct SubordinationResult {
    Complex z;
    Complex Zn;
    int iterations = 0;
    double residual = 0.0;
};

SubordinationResult solve_Zn(const CauchyFunction& g, int n, Complex z, const SolverOptions& options = {});
SubordinationResult solve_Zn(const Law& law, int n, HalfPlanePoint z, const SolverOptions& options = {});

/// Cauchy transform of the n-fold free convolution power, G(Z_n(z)).
Complex power_cauchy(const Law& law, int n, HalfPlanePoint z, const SolverOptions& options = {});

/// Evaluator z -> (G, G') of the n-fold free convolution power.
CauchyFunction free_power(CauchyFunction g, int n, const SolverOptions& options = {});
CauchyFunction free_power(const Law& law, int n, const SolverOptions& options = {});

/// z = Z1 + Z2 - F1(Z1) and F1(Z1) = F2(Z2).
struct PairResult {
    Complex Z1;
    Complex Z2;
    int iterations = 0;
    double residual = 0.0;
};

PairResult solve_pair(const CauchyFunction& g1, const CauchyFunction& g2, Complex z,
                      const SolverOptions& options = {});
PairResult solve_pair(const Law& m1, const Law& m2, HalfPlanePoint z, const SolverOptions& options = {});

/// Evaluator of the free additive convolution of two laws, G1(Z1(z)).
CauchyFunction free_convolution(CauchyFunction g1, CauchyFunction g2, const SolverOptions& options = {});

/// Z_n^{(-1)}(z) = n z - (n - 1) F(z).
Complex inverse_Zn(const Law& law, int n, HalfPlanePoint z);

/// Unique positive root y of (n - 1) \int sigma(du) / ((u - x)^2 + y^2) = 1, or 0
/// when there is none.
double boundary_curve(const FiniteMeasure& sigma, int n, double x);
double boundary_curve(const Measure& m, int n, double x);

}  // namespace freeconv
