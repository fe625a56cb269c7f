#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "freeconv/families.hpp"
#include "freeconv/inversion.hpp"
#include "freeconv/subordination.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv {

struct GridSpec {
    double lo = -4.0;
    double hi = 4.0;
    int points = 2001;
};

/// "lo:hi:points".
GridSpec parse_grid(const std::string& text);

struct ExperimentConfig {
    Law measure = Law(Measure());
    std::vector<int> n_values;
    GridSpec grid{};
    std::vector<double> eta_schedule{0.04, 0.02, 0.01};
    std::optional<FamilySpec> target;  // empty: Meixner w_{a_n} with a_n = m_3 / sqrt(n)
    std::string output_path;
    SolverOptions solver{};

    void validate() const;
};

/// Keys: measure (object, or path relative to the config file), n_values,
/// grid ({lo, hi, points} or "lo:hi:points"), eta_schedule, target
/// ("meixner_auto" or a family object), output_path.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = std::filesystem::path("."));

struct RateRow {
    int n = 0;
    double a_n = 0.0;
    double distance = 0.0;
    bool failed = false;
    std::string error;
};

struct RateReport {
    std::vector<RateRow> rows;
    double slope = 0.0;
    double slope_stderr = 0.0;
    int fitted = 0;
};

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

/// Ordinary least squares of log y on log x.
LogLogFit fit_log_log(const std::vector<double>& x, const std::vector<double>& y);

/// Worker cap from FREECONV_THREADS (unset or 0: hardware concurrency).
int worker_threads();

/// For each n: Kolmogorov distance between the n-fold free convolution power of
/// the measure dilated by sqrt(n) and the target law, both inverted on the same
/// grid and eta schedule; then the log-log slope over the successful rows.
RateReport run_rate_experiment(const ExperimentConfig& config);

/// Header "n,a_n,distance", 12 significant digits, slope lines prefixed '#'.
void write_rate_csv(std::ostream& out, const RateReport& report);

}  // namespace freeconv
