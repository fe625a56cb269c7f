#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "freeconv/cli.hpp"
#include "freeconv/families.hpp"
#include "freeconv/inversion.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;
using freeconv::cli::run;

namespace {

const std::string data = FREECONV_TEST_DATA;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<double> numbers(const std::string& text) {
    std::vector<double> v;
    std::istringstream in(text);
    for (double x; in >> x;) v.push_back(x);
    return v;
}

fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "freeconv_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("moments and cumulants") {
    const auto m = call({"moments", data + "/bernoulli.json", "--max-k", "4"});
    CHECK(m.code == 0);
    CHECK(numbers(m.out) == std::vector<double>{0, 1, 0, 1});

    const auto c = call({"cumulants", data + "/semicircle.json", "--max-k", "6"});
    REQUIRE(c.code == 0);
    const auto alpha = numbers(c.out);
    REQUIRE(alpha.size() == 6);
    const std::vector<double> expected{0, 1, 0, 0, 0, 0};
    for (int k = 0; k < 6; ++k) CHECK(std::abs(alpha[k] - expected[k]) < 1e-3);
}

TEST_CASE("cumulants of a semicircle density file") {
    // Grid density written here so that the file content is the oracle input.
    const auto sc = freeconv::semicircle_grid_measure(2001);
    const fs::path path = scratch() / "sc_grid.json";
    {
        std::ofstream f(path);
        f << std::setprecision(17);
        f << "{\"density\": {\"grid\": [";
        for (std::size_t i = 0; i < sc.grid().size(); ++i) f << (i ? "," : "") << sc.grid()[i];
        f << "], \"values\": [";
        for (std::size_t i = 0; i < sc.values().size(); ++i) f << (i ? "," : "") << sc.values()[i];
        f << "]}, \"normalize\": true}";
    }
    const auto c = call({"cumulants", path.string(), "--max-k", "6"});
    REQUIRE(c.code == 0);
    const auto alpha = numbers(c.out);
    const std::vector<double> expected{0, 1, 0, 0, 0, 0};
    for (int k = 0; k < 6; ++k) CHECK(std::abs(alpha[k] - expected[k]) < 1e-3);
}

TEST_CASE("distance of identical files is zero") {
    const fs::path out = scratch() / "sc.csv";
    REQUIRE(call({"cdf", data + "/semicircle.json", "--grid", "-3:3:301", "--out", out.string()}).code == 0);
    const auto d = call({"distance", out.string(), out.string()});
    CHECK(d.code == 0);
    CHECK(d.out == "0\n");
}

TEST_CASE("power --n 2 on Bernoulli against the arcsine law") {
    const fs::path dir = scratch();
    const fs::path power = dir / "power.csv";
    const fs::path arcsine = dir / "arcsine.csv";
    const auto r = call({"power", data + "/bernoulli.json", "--n", "2", "--grid", "-2.5:2.5:2001", "--eta",
                         "0.001,0.0005", "--out", power.string()});
    REQUIRE(r.code == 0);
    {
        std::ofstream f(arcsine);
        freeconv::CdfTable t;
        t.xs = freeconv::linspace(-2.5, 2.5, 2001);
        for (double x : t.xs) t.values.push_back(testing::arcsine_cdf(x));
        t.left_limits = t.values;
        freeconv::write_cdf_csv(f, t);
    }
    const auto d = call({"distance", power.string(), arcsine.string()});
    REQUIRE(d.code == 0);
    CHECK(std::stod(d.out) < 5e-3);
}

TEST_CASE("power with the default grid and stdout") {
    const auto r = call({"power", data + "/bernoulli.json", "--n", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("x,cdf,cdf_left\n", 0) == 0);
    std::istringstream in(r.out);
    const auto t = freeconv::read_cdf_csv(in);
    CHECK(t.xs.size() == 2001);
    CHECK(t.xs.front() == Catch::Approx(-3.0 * std::sqrt(3.0) - 1.0));
}

TEST_CASE("convolve") {
    const auto r = call({"convolve", data + "/bernoulli.json", data + "/bernoulli.json", "--grid", "-3:3:601"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const auto t = freeconv::read_cdf_csv(in);
    CHECK(t.at(0.0).first == Catch::Approx(0.5).margin(1e-3));
}

TEST_CASE("idcheck") {
    const auto b = call({"idcheck", data + "/bernoulli.json"});
    CHECK(b.code == 0);
    CHECK((b.out.rfind("ContinuationBroken", 0) == 0 || b.out.rfind("FailsAt", 0) == 0));
    CHECK(call({"idcheck", data + "/semicircle.json"}).out == "PassesSampledCriterion\n");
    CHECK(call({"idcheck", data + "/meixner1.json"}).out == "PassesSampledCriterion\n");
}

TEST_CASE("rates writes byte-identical output") {
    const fs::path dir = scratch();
    const fs::path a = dir / "rates_a.csv", b = dir / "rates_b.csv";
    REQUIRE(call({"rates", data + "/rates_bernoulli.json", "--out", a.string()}).code == 0);
    REQUIRE(call({"rates", data + "/rates_bernoulli.json", "--out", b.string()}).code == 0);
    std::ifstream fa(a), fb(b);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().rfind("n,a_n,distance\n", 0) == 0);
}

TEST_CASE("exit codes") {
    CHECK(call({}).code == 1);
    CHECK(call({"bogus"}).code == 1);
    CHECK(call({"moments"}).code == 1);
    CHECK(call({"moments", "/nonexistent.json"}).code == 1);
    CHECK(call({"power", data + "/bernoulli.json", "--n", "2", "--grid", "1:2"}).code == 1);
    CHECK(call({"power", data + "/bernoulli.json", "--n", "2", "--eta", "0.1"}).code == 2);
    CHECK(call({"--help"}).code == 0);
    const auto d0 = call({"rates", data + "/rates_delta.json"});
    CHECK(d0.code == 2);
    CHECK(d0.err.find("NotNormalized") != std::string::npos);
}
