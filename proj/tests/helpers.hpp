#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "freeconv/error.hpp"
#include "freeconv/measure.hpp"

namespace testing {

using freeconv::Complex;

inline freeconv::Measure bernoulli() { return freeconv::make_atomic({{-1.0, 0.5}, {1.0, 0.5}}); }
inline freeconv::Measure delta(double a) { return freeconv::make_atomic({{a, 1.0}}); }

// Closed forms used as oracles.
inline double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) + std::asin(x / 2.0) / std::numbers::pi;
}

inline double arcsine_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + std::asin(x / 2.0) / std::numbers::pi;
}

// sqrt(z^2 - c) with the branch ~ z at infinity, written independently of the
// library's edge_sqrt: pick the root whose sign agrees with z.
inline Complex sqrt_like_z(Complex z, double c) {
    Complex r = std::sqrt(z * z - c);
    if (std::real(std::conj(r) * z) < 0.0) r = -r;
    return r;
}

inline freeconv::Measure random_atomic(std::mt19937_64& rng, int atoms, double spread = 3.0,
                                       double min_gap = 0.0) {
    std::uniform_real_distribution<double> pos(-spread, spread);
    std::uniform_real_distribution<double> wt(0.1, 1.0);
    std::vector<freeconv::Atom> out;
    while (static_cast<int>(out.size()) < atoms) {
        const double x = pos(rng);
        bool ok = true;
        for (const auto& a : out) ok = ok && std::abs(a.position - x) >= min_gap;
        if (ok) out.push_back({x, wt(rng)});
    }
    double total = 0.0;
    for (const auto& a : out) total += a.weight;
    for (auto& a : out) a.weight /= total;
    // Renormalized weights sum to one up to rounding; fix the last one exactly.
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < out.size(); ++i) head += out[i].weight;
    out.back().weight = 1.0 - head;
    return freeconv::make_atomic(out);
}

template <class F>
bool throws_code(F&& f, freeconv::ErrorCode code) {
    try {
        f();
    } catch (const freeconv::Error& e) {
        return e.code() == code;
    }
    return false;
}

}  // namespace testing
