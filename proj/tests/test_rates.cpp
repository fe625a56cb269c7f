#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "freeconv/io.hpp"
#include "freeconv/rates.hpp"
#include "helpers.hpp"

using namespace freeconv;
using testing::throws_code;

namespace {

ExperimentConfig base(Law law) {
    ExperimentConfig cfg;
    cfg.measure = std::move(law);
    cfg.n_values = {4, 8, 16, 32, 64, 128, 256};
    return cfg;
}

}  // namespace

TEST_CASE("log-log fit recovers exact power laws") {
    const std::vector<double> x{1, 2, 4, 8};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, -0.75));
    const auto fit = fit_log_log(x, y);
    CHECK(fit.slope == Catch::Approx(-0.75));
    CHECK(fit.intercept == Catch::Approx(std::log(3.0)));
    CHECK(fit.slope_stderr < 1e-12);
}

TEST_CASE("Bernoulli rate is close to 1/n") {
    const auto report = run_rate_experiment(base(Law(testing::bernoulli())));
    REQUIRE(report.rows.size() == 7);
    for (const auto& row : report.rows) {
        CHECK_FALSE(row.failed);
        CHECK(row.a_n == 0.0);
        CHECK(row.distance >= 0.0);
        CHECK(row.distance <= 1.0);
        // Upper half of the two-sided estimate: distance <= c / sqrt(n), c < 10.
        CHECK(row.distance * std::sqrt(double(row.n)) < 10.0);
    }
    CHECK(report.slope >= -1.25);
    CHECK(report.slope <= -0.75);
}

TEST_CASE("semicircle input stays at inversion error") {
    const auto report = run_rate_experiment(base(Law(FamilySpec::semicircle())));
    for (const auto& row : report.rows) CHECK(row.distance < 2e-2);
}

TEST_CASE("skewed input uses a_n = m3 / sqrt(n)") {
    // Centered, unit variance, m3 = (1 - 2p) / sqrt(p (1 - p)) for a scaled Bernoulli(p).
    const double p = 0.3, s = std::sqrt(p * (1 - p));
    const Measure m = make_atomic({{-p / s, 1 - p}, {(1 - p) / s, p}});
    auto cfg = base(Law(m));
    cfg.n_values = {4, 16, 64};
    const auto report = run_rate_experiment(cfg);
    const double m3 = moment(m, 3);
    for (const auto& row : report.rows) {
        CHECK(row.a_n == Catch::Approx(m3 / std::sqrt(double(row.n))));
        CHECK_FALSE(row.failed);
    }
    CHECK(report.rows.back().distance < report.rows.front().distance);
}

TEST_CASE("unnormalized input is rejected") {
    CHECK(throws_code([] { run_rate_experiment(base(Law(testing::delta(0.0)))); }, ErrorCode::NotNormalized));
    CHECK(throws_code([] { run_rate_experiment(base(Law(FamilySpec::semicircle(0.5, 1.0)))); },
                      ErrorCode::NotNormalized));
}

TEST_CASE("config validation") {
    auto cfg = base(Law(testing::bernoulli()));
    cfg.n_values = {4};
    CHECK(throws_code([&] { cfg.validate(); }, ErrorCode::InvalidArgument));
    cfg.n_values = {8, 4};
    CHECK(throws_code([&] { cfg.validate(); }, ErrorCode::InvalidArgument));
    cfg.n_values = {4, 8};
    cfg.grid.points = 100;
    CHECK(throws_code([&] { cfg.validate(); }, ErrorCode::InvalidArgument));
    CHECK(throws_code([] { parse_grid("1:2"); }, ErrorCode::ParseError));
    CHECK(throws_code([] { parse_grid("2:1:10"); }, ErrorCode::InvalidArgument));
    const auto g = parse_grid("-3:3.5:401");
    CHECK(g.lo == -3.0);
    CHECK(g.hi == 3.5);
    CHECK(g.points == 401);
}

TEST_CASE("config from JSON") {
    const auto j = nlohmann::json::parse(R"({
        "measure": {"atoms": [[-1, 0.5], [1, 0.5]]},
        "n_values": [2, 4],
        "grid": "-3:3:301",
        "eta_schedule": [0.02, 0.01],
        "target": {"name": "semicircle", "params": {"mean": 0, "variance": 1}},
        "output_path": "out.csv"})");
    const auto cfg = config_from_json(j);
    CHECK(cfg.n_values == std::vector<int>{2, 4});
    CHECK(cfg.grid.points == 301);
    CHECK(cfg.eta_schedule == std::vector<double>{0.02, 0.01});
    REQUIRE(cfg.target.has_value());
    CHECK(cfg.target->name == FamilyName::Semicircle);
    CHECK(cfg.output_path == "out.csv");

    const auto file_cfg = config_from_json(load_json(FREECONV_TEST_DATA "/rates_bernoulli.json"), FREECONV_TEST_DATA);
    CHECK(file_cfg.n_values.size() == 7);
    CHECK_FALSE(file_cfg.target.has_value());

    CHECK(throws_code([] { config_from_json(nlohmann::json::parse(R"({"n_values": [1, 2]})")); },
                      ErrorCode::ParseError));
}

TEST_CASE("CSV output is deterministic and thread-count independent") {
    auto cfg = base(Law(testing::bernoulli()));
    cfg.n_values = {4, 8, 16, 32};
    std::ostringstream a, b;
    setenv("FREECONV_THREADS", "1", 1);
    write_rate_csv(a, run_rate_experiment(cfg));
    setenv("FREECONV_THREADS", "3", 1);
    write_rate_csv(b, run_rate_experiment(cfg));
    unsetenv("FREECONV_THREADS");
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("n,a_n,distance\n4,0,", 0) == 0);
    CHECK(a.str().find("# slope=") != std::string::npos);
    CHECK(a.str().find("# slope_stderr=") != std::string::npos);
}

TEST_CASE("failed rows are reported and excluded from the fit") {
    RateReport report;
    report.rows = {{4, 0.0, 0.1, false, ""}, {8, 0.0, std::nan(""), true, "diverged"}, {16, 0.0, 0.025, false, ""}};
    report.slope = -1.0;
    std::ostringstream out;
    write_rate_csv(out, report);
    CHECK(out.str().find("8,0,nan") != std::string::npos);
    CHECK(out.str().find("# failed n=8: diverged") != std::string::npos);
}
