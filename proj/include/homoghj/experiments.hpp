#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "homoghj/fd_solver.hpp"
#include "homoghj/fem_effham.hpp"
#include "homoghj/hamiltonians.hpp"

namespace homoghj {

// ---------------------------------------------------------------- catalog

enum class ExampleFamily { vanishing, homogenization, effective_hamiltonian };

/// A 1-D Cauchy problem of the vanishing-viscosity or homogenization families.
struct CauchyExample {
    std::string id;
    ExampleFamily family = ExampleFamily::vanishing;
    Separable H;
    std::vector<InitialDatum1D> data;  // several only for 5.5 (one per M)
    double a = -6.0;
    double b = 6.0;
    double w0 = -2.5;
    double w1 = 2.5;
    double T = 1.0;
    std::string summary;
};

/// Ids in catalog order: 5.1 .. 5.11, 6.1, 6.2.
std::vector<std::string> example_ids();
/// One line per example: id and the problem it poses.
std::string example_catalog_text();
bool is_vanishing_id(const std::string& id);
bool is_homogenization_id(const std::string& id);
bool is_effham_id(const std::string& id);
/// Throws ConfigError naming the valid ids when `id` is not a 1-D example.
CauchyExample cauchy_example(const std::string& id);

/// Accepted slope band for an example series (point observations +-0.15,
/// interval observations widened by 0.05).
std::pair<double, double> expected_slope_band(const std::string& id);

// ---------------------------------------------------------------- series

enum class Parameter { epsilon, sigma, h };
const char* parameter_name(Parameter p);

struct RatePoint {
    double parameter = 0.0;
    double error = 0.0;
};

struct SeriesMeta {
    std::string example_id;
    double dx = 0.0;
    double T = 0.0;
    double w0 = 0.0;
    double w1 = 0.0;
    double c_cfl = 0.0;
    double a = 0.0;
    double b = 0.0;
    double gradient_radius = 0.0;
    std::string reference;
    std::string note;
};

struct RateSeries {
    std::string name;
    Parameter parameter = Parameter::epsilon;
    std::vector<RatePoint> points;  // parameters strictly decreasing
    double fitted_slope = 0.0;
    double fit_residual = 0.0;
    SeriesMeta meta;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ExperimentReport {
    std::string run_id;
    std::vector<RateSeries> series;
    std::vector<Check> checks;
    /// Optional table of effective-Hamiltonian evaluations (written as <run_id>_table.csv).
    std::vector<EffHamResult> effham_rows;
    std::vector<std::string> csv_paths;

    bool all_passed() const;
};

struct RateFit {
    double slope = 0.0;
    double residual = 0.0;
};

/// Least-squares slope of log(error) against log(parameter) over points with
/// error > 1e-14; residual is the RMS deviation. Throws TooFewPoints below 3 points.
RateFit fit_rate(std::span<const RatePoint> points);
/// Fills fitted_slope and fit_residual.
void refit(RateSeries& s);

/// O(sqrt(eps)) consistency constant C = max error/sqrt(eps) and whether C <= 10 * (first error/sqrt(eps_0)).
std::pair<double, bool> sqrt_eps_consistency(const RateSeries& s);

// ---------------------------------------------------------------- suites

struct FDSuiteOptions {
    double dx = 1.0 / 512.0;
    double c_cfl = 0.9;
    int k_max = 9;
    std::optional<double> T;
    std::optional<std::pair<double, double>> domain;
    std::optional<std::pair<double, double>> window;
    /// Overrides the default gradient radius.
    std::optional<double> gradient_radius;
    unsigned threads = 0;
    simd::Isa isa = simd::preferred_isa();
};

/// sup-window errors at T against the exact limit (5.1-5.4) or the Hopf-Lax
/// formula (5.5, one series per M).
std::vector<RateSeries> run_vanishing_suite(const std::string& id, const FDSuiteOptions& opts = {});

/// Cauchy differences ||u^eps - u^{eps/2}|| on a shared grid; points keyed by the larger eps.
RateSeries run_homogenization_suite(const std::string& id, const FDSuiteOptions& opts = {});

struct EffHamSuiteOptions {
    Vec2 p{3.0, 1.0};
    /// Finest mesh h = 1/N; 0 picks the example default (256 for 6.1, 64 for 6.2).
    int N = 0;
    /// Coarsest mesh of the h-series.
    int N_min = 4;
    std::vector<double> sigmas;          // empty: the example default
    std::vector<double> h_series_sigmas; // 6.1 only; empty: {1, 0.1, 0.01}
    bool surface = true;                 // 6.2 only: evaluate the p-grid table
    double surface_sigma = 1.0 / 16.0;
    HowardConfig howard;
    unsigned threads = 0;
};

/// 6.1: error-vs-h series at fixed sigma and the error-vs-sigma series at h = 1/N.
/// 6.2: Cauchy-in-sigma series at p = (-1,-1) and the surface table over S x S.
ExperimentReport run_effham_suite(const std::string& id, const EffHamSuiteOptions& opts = {});

/// The {+-1, +-3/4, +-1/2, +-3/8, +-1/4, +-1/8, 0} grid of p components for 6.2.
std::vector<double> effham_surface_axis();

/// Closed-form and quadrature checks of the sharp lower bounds; never throws.
ExperimentReport run_sharpness_suite();

/// Vanishing or homogenization suite wrapped into a report with slope-band and consistency checks.
ExperimentReport run_fd_report(const std::string& id, const FDSuiteOptions& opts = {});

// ---------------------------------------------------------------- output

/// Writes <series>.csv, <series>.meta.json, <series>.gnuplot per series, the
/// report metadata <run_id>.meta.json (merged into a series of the same name)
/// and <run_id>_table.csv for effective-Hamiltonian tables. Returns all paths.
std::vector<std::filesystem::path> write_outputs(ExperimentReport& report, const std::filesystem::path& out_dir);

/// "parameter,error" CSV text with 17 significant digits and LF endings.
std::string series_csv(const RateSeries& s);
/// Parses series_csv output back into points.
std::vector<RatePoint> parse_series_csv(const std::string& text);

// ---------------------------------------------------------------- workers

/// Runs job(i) for i in [0, n) on up to `threads` workers (0 = hardware
/// concurrency). Jobs write into their own slots, so results do not depend on
/// scheduling. The first exception (lowest index) is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& job);

}  // namespace homoghj
