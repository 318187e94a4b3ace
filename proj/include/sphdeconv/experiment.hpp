#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sphdeconv/estimator.hpp"
#include "sphdeconv/noise.hpp"
#include "sphdeconv/simulate.hpp"

namespace sphdeconv {

inline constexpr const char* kVersion = "1.0.0";

struct ExperimentConfig {
    std::string preset;
    TargetDensity target = UniformDensity{};
    NoiseModel noise = ZAxisUniform{kPi / 8};
    std::size_t n = 1500;
    std::vector<double> kappa0{0.38};
    std::optional<int> J;
    double M = 1.0;
    std::uint64_t seed = 1;
    int repetitions = 1;
    bool empirical_noise = false;
    int grid_theta = 90;
    int grid_phi = 180;
    int peak_level = 5;  ///< equal-area level of the grid searched for the peak
    double cond_limit = kDefaultConditionLimit;
    std::string out_dir;  ///< empty: write nothing
};

/// Named presets: table1, table2 (uniform target) and bump-pi8, bump-pi4, bump-pi2.
ExperimentConfig preset_config(const std::string& name);

/// Applies one key/value setting (config-file keys: preset, target, noise, n, kappa0, J, M,
/// seed, reps, empirical_noise, grid_theta, grid_phi, peak_level, cond_limit, out).
/// Throws ConfigError on unknown keys or bad values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Flat "key = value" file, '#' starts a comment.
void load_config(ExperimentConfig& config, std::istream& is);

/// Parses "a=<radians>", "laplace=<rho2>", "rosenthal=<theta>,<p>" or "none".
NoiseModel parse_noise(const std::string& spec);

/// J override checked against select_J(N), or select_J(N) itself.
int resolve_J(const ExperimentConfig& config);

/// {experiment, seed, n, kappa0, J, noise, empirical_noise, M, version, ...}.
nlohmann::json metadata(const ExperimentConfig& config, const std::string& experiment);

// ---------------------------------------------------------------------------

struct Example1Result {
    std::vector<double> kappa0;
    int J = 0;
    /// counts[k][rep][j]
    std::vector<std::vector<std::vector<int>>> counts;

    double mean(std::size_t k, int j) const;
};

/// Uniform target: survivor counts per level for every kappa0 and repetition.
/// Files: table.csv (mean per kappa0 and level), survivors.csv (per repetition).
Example1Result run_example1(const ExperimentConfig& config);

struct PeakReport {
    int repetition = 0;
    std::uint64_t seed = 0;
    SphereDirection peak;
    double geodesic_error = 0.0;
    double colatitude_error = 0.0;
    std::vector<int> counts;
    std::vector<int> excluded_degrees;
};

struct Example2Result {
    int J = 0;
    std::vector<PeakReport> reports;
};

/// Bump target: reconstruction, peak location and survivor counts per repetition.
/// Files: peaks.json, survivors.csv, and for repetition 0 grid.csv, expansion.json,
/// observations.csv, rotations.csv.
Example2Result run_example2(const ExperimentConfig& config);

/// Estimation on external observations (theta,phi rows). With `rotations_path` the noise
/// spectrum is estimated from those rotations, otherwise the analytic config.noise is used.
/// Files: expansion.json, grid.csv.
ThresholdedExpansion run_estimate(const ExperimentConfig& config, const std::string& observations_path,
                                  const std::string& rotations_path = {});

std::vector<SphereDirection> read_observations_csv(std::istream& is);
std::vector<EulerRotation> read_rotations_csv(std::istream& is);
void write_rotations_csv(std::span<const EulerRotation> rotations, std::ostream& os);

/// Equiangular grid, theta_i = (i + 1/2) pi / n_theta, phi_k = 2 pi k / n_phi, theta-major.
std::vector<SphereDirection> equiangular_grid(int n_theta, int n_phi);

}  // namespace sphdeconv
