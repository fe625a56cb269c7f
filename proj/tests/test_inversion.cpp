#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "freeconv/families.hpp"
#include "freeconv/inversion.hpp"
#include "freeconv/subordination.hpp"
#include "helpers.hpp"

using namespace freeconv;
using testing::bernoulli;
using testing::delta;
using testing::throws_code;

namespace {

double sup_error(const CdfTable& t, double (*cdf)(double)) {
    double worst = 0.0;
    for (std::size_t i = 0; i < t.xs.size(); ++i) worst = std::max(worst, std::abs(t.values[i] - cdf(t.xs[i])));
    return worst;
}

InversionOptions schedule(std::vector<double> eta) {
    InversionOptions o;
    o.eta_schedule = std::move(eta);
    return o;
}

}  // namespace

TEST_CASE("point mass inversion") {
    const auto xs = linspace(-1.0, 1.0, 201);
    const auto t = stieltjes_cdf([](Complex z) { return 1.0 / z; }, xs, schedule({0.1, 0.05}));
    CHECK(t.values[75] < 1e-2);
    CHECK(t.values[125] > 1.0 - 1e-2);
    CHECK(t.values.back() - t.values.front() == Catch::Approx(1.0).margin(1e-2));
}

TEST_CASE("semicircle closed form inversion") {
    const auto xs = linspace(-2.5, 2.5, 2001);
    const auto g = [](Complex z) { return family_cauchy(FamilySpec::semicircle(), z); };
    const auto t = stieltjes_cdf(g, xs, schedule({0.02, 0.01}));
    CHECK(sup_error(t, testing::semicircle_cdf) < 5e-3);
    CHECK_NOTHROW(t.validate());
    CHECK(t.eta_used == 0.01);
}

TEST_CASE("arcsine inversion from the subordination engine") {
    const auto xs = linspace(-2.5, 2.5, 2001);
    const auto g = free_power(Law(bernoulli()), 2);
    const auto eval = [&](Complex z) { return g(z).value; };
    // The arcsine density has inverse square-root edges; the default-scale
    // schedule cannot resolve them to 5e-3, a finer one can.
    const auto coarse = stieltjes_cdf(eval, xs, schedule({0.02, 0.01}));
    CHECK(sup_error(coarse, testing::arcsine_cdf) < 2e-2);
    const auto fine = stieltjes_cdf(eval, xs, schedule({1e-3, 5e-4}));
    CHECK(sup_error(fine, testing::arcsine_cdf) < 5e-3);
}

TEST_CASE("schedule validation") {
    const auto xs = linspace(-1.0, 1.0, 11);
    const auto g = [](Complex z) { return 1.0 / z; };
    CHECK(throws_code([&] { stieltjes_cdf(g, xs, schedule({0.1})); }, ErrorCode::ScheduleTooShort));
    CHECK(throws_code([&] { stieltjes_cdf(g, xs, schedule({0.05, 0.1})); }, ErrorCode::InvalidArgument));
    const std::vector<double> bad{0.0, -1.0};
    CHECK(throws_code([&] { stieltjes_cdf(g, bad, {}); }, ErrorCode::InvalidArgument));
    const auto failing = [](Complex) -> Complex { throw Error(ErrorCode::FixedPointDiverged, "boom"); };
    CHECK(throws_code([&] { stieltjes_cdf(failing, xs, {}); }, ErrorCode::EvaluatorFailed));
}

TEST_CASE("mass warning on truncated grids") {
    const auto g = [](Complex z) { return family_cauchy(FamilySpec::semicircle(), z); };
    const auto narrow = stieltjes_cdf(g, linspace(-1.0, 1.0, 201));
    CHECK(narrow.mass_warning);
    const auto wide = stieltjes_cdf(g, linspace(-3.0, 3.0, 601));
    CHECK_FALSE(wide.mass_warning);
}

TEST_CASE("kolmogorov distance") {
    const auto d0 = measure_to_cdf(delta(0.0));
    const auto d1 = measure_to_cdf(delta(1.0));
    CHECK(kolmogorov(d0, d0).distance == 0.0);
    CHECK(kolmogorov(d0, d1).distance == 1.0);
    CHECK(kolmogorov(measure_to_cdf(bernoulli()), d0).distance == 0.5);
    const auto r = kolmogorov(measure_to_cdf(bernoulli()), measure_to_cdf(make_atomic({{-1.0, 0.25}, {1.0, 0.75}})));
    CHECK(r.distance == Catch::Approx(0.25));
    CHECK(r.argmax_x == -1.0);
}

TEST_CASE("measure_to_cdf") {
    const auto d = measure_to_cdf(delta(0.0));
    CHECK(d.at(0.0).first == 1.0);
    CHECK(d.at(0.0).second == 0.0);
    CHECK(d.at(-1e-9).first == 0.0);
    const auto b = measure_to_cdf(bernoulli());
    CHECK(b.at(-1.0).first == 0.5);
    CHECK(b.at(-1.0).second == 0.0);
    CHECK(b.at(0.0).first == 0.5);
    CHECK(b.at(1.0).first == 1.0);
    CHECK(b.at(1.0).second == 0.5);
    CHECK_NOTHROW(b.validate());
}

TEST_CASE("inversion agrees with exact CDFs") {
    const auto sc = semicircle_grid_measure(2001);
    const auto xs = linspace(-3.0, 3.0, 2001);
    const auto exact = measure_to_cdf(sc);
    const auto inv = stieltjes_cdf([&](Complex z) { return cauchy(sc, z); }, xs);
    CHECK(kolmogorov(exact, inv).distance < 5e-3);

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 3; ++trial) {
        const Measure m = testing::random_atomic(rng, 3, 2.0, 0.5);
        const auto ex = measure_to_cdf(m);
        const auto grid = linspace(-3.0, 3.0, 3001);
        const auto t = stieltjes_cdf([&](Complex z) { return cauchy(m, z); }, grid, schedule({2e-3, 1e-3}));
        // Compare away from the jumps where the smoothed table cannot be sharp.
        double worst = 0.0;
        for (double x : grid) {
            bool near = false;
            for (const auto& a : m.atoms()) near = near || std::abs(x - a.position) < 0.05;
            if (!near) worst = std::max(worst, std::abs(t.at(x).first - ex.at(x).first));
        }
        CHECK(worst < 5e-3);
    }
}

TEST_CASE("free convolution with a semicircle does not increase the Kolmogorov distance") {
    std::mt19937_64 rng(77);
    const Law sc(FamilySpec::semicircle());
    const auto xs = linspace(-5.0, 5.0, 2001);
    for (int trial = 0; trial < 10; ++trial) {
        const Measure a = testing::random_atomic(rng, 2, 2.0);
        const Measure b = testing::random_atomic(rng, 2, 2.0);
        const double before = kolmogorov(measure_to_cdf(a), measure_to_cdf(b)).distance;
        const auto ga = free_convolution(Law(a).as_function(), sc.as_function());
        const auto gb = free_convolution(Law(b).as_function(), sc.as_function());
        const auto ta = stieltjes_cdf([&](Complex z) { return ga(z).value; }, xs);
        const auto tb = stieltjes_cdf([&](Complex z) { return gb(z).value; }, xs);
        CHECK(kolmogorov(ta, tb).distance <= before + 5e-3);
    }
}

TEST_CASE("tail smoothing inequality") {
    const auto d = tail_smoothing_check(delta(0.0), 2.0);
    CHECK(d.lhs == 0.0);
    CHECK(d.rhs >= 0.0);
    CHECK(d.holds);
    const auto b1 = tail_smoothing_check(bernoulli(), 1.0);
    CHECK(b1.lhs == 0.0);
    CHECK(b1.rhs == Catch::Approx(2.0 * (1.0 - std::sin(1.0))).epsilon(1e-6));
    CHECK(b1.holds);
    const auto b3 = tail_smoothing_check(bernoulli(), 3.0);
    CHECK(b3.lhs == 1.0);
    CHECK(b3.rhs == Catch::Approx(2.0 * (3.0 - std::sin(3.0)) / 3.0).epsilon(1e-6));
    CHECK(b3.holds);

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const Measure m = testing::random_atomic(rng, 4, 10.0);
        for (double u : {0.1, 0.5, 1.0, 2.0}) CHECK(tail_smoothing_check(m, u).holds);
    }
    CHECK(throws_code([] { tail_smoothing_check(bernoulli(), 0.0); }, ErrorCode::InvalidArgument));
}

TEST_CASE("CDF CSV round trip") {
    const auto t = stieltjes_cdf([](Complex z) { return family_cauchy(FamilySpec::semicircle(), z); },
                                 linspace(-3.0, 3.0, 101));
    std::stringstream buf;
    write_cdf_csv(buf, t);
    const auto back = read_cdf_csv(buf);
    CHECK(back.xs == t.xs);
    CHECK(back.values == t.values);
    CHECK(back.left_limits == t.left_limits);

    std::stringstream no_header("0,0,0\n");
    CHECK(throws_code([&] { read_cdf_csv(no_header); }, ErrorCode::ParseError));
    std::stringstream bad("x,cdf,cdf_left\n0,abc,0\n");
    CHECK(throws_code([&] { read_cdf_csv(bad); }, ErrorCode::ParseError));
    std::stringstream decreasing("x,cdf,cdf_left\n0,0.5,0.5\n1,0.2,0.2\n");
    CHECK(throws_code([&] { read_cdf_csv(decreasing); }, ErrorCode::InvalidArgument));
}

TEST_CASE("family tables carry almost all mass on six-sigma grids") {
    for (const FamilySpec& f : {FamilySpec::semicircle(1.0, 0.5), FamilySpec::free_poisson(2.0),
                                FamilySpec::meixner(0.5), FamilySpec::meixner(-1.0)}) {
        const Law law(f);
        const double m = law.moment(1), s = std::sqrt(law.moment(2) - m * m);
        const double r = 6.0 * s + std::abs(m);
        const auto t = stieltjes_cdf([&](Complex z) { return family_cauchy(f, z); }, linspace(-r, r, 2001));
        CHECK_NOTHROW(t.validate());
        CHECK(t.values.back() - t.values.front() >= 0.995);
    }
}
