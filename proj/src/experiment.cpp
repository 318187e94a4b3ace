#include "sphdeconv/experiment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "sphdeconv/error.hpp"

namespace sphdeconv {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

bool parse_double(const std::string& s, double& out)
{
    const std::string t = trim(s);
    if (t.empty()) return false;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    return res.ec == std::errc() && res.ptr == t.data() + t.size() && std::isfinite(out);
}

double config_double(const std::string& key, const std::string& value)
{
    double v = 0.0;
    if (!parse_double(value, v)) throw ConfigError("bad numeric value for '" + key + "': " + value);
    return v;
}

long long config_int(const std::string& key, const std::string& value)
{
    const std::string t = trim(value);
    long long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError("bad integer value for '" + key + "': " + value);
    return v;
}

bool config_bool(const std::string& key, const std::string& value)
{
    const std::string t = trim(value);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError("bad boolean value for '" + key + "': " + value);
}

void write_csv_header(std::ostream& os, const nlohmann::json& meta)
{
    for (const auto& [k, v] : meta.items()) {
        os << "# " << k << '=';
        if (v.is_string())
            os << v.get<std::string>();
        else
            os << v.dump();
        os << '\n';
    }
}

std::ofstream open_output(const std::string& dir, const std::string& name)
{
    std::filesystem::create_directories(dir);
    std::ofstream os(std::filesystem::path(dir) / name, std::ios::binary);
    if (!os) throw ConfigError("cannot open output file " + (std::filesystem::path(dir) / name).string());
    return os;
}

const ZAxisUniform& generative_noise(const ExperimentConfig& config)
{
    const auto* z = std::get_if<ZAxisUniform>(&config.noise);
    if (!z) throw ConfigError("simulation noise must be a z-axis uniform model (noise = a=<radians>)");
    return *z;
}

struct RepEstimate {
    InverseSpectrum inverse;
    NeedletCoefficients beta;
    NeedletCoefficients sigmas;
};

RepEstimate estimate_coefficients(const ExperimentConfig& config, const NeedletFrame& frame,
                                  std::span<const SphereDirection> z,
                                  std::span<const EulerRotation> rotations)
{
    const NoiseModel model = config.empirical_noise
                                 ? NoiseModel{EmpiricalNoise{{rotations.begin(), rotations.end()}}}
                                 : config.noise;
    RepEstimate out;
    out.inverse = invert(noise_spectrum(model, frame.max_degree()), config.cond_limit);
    out.beta = needlet_coeff_estimates(frame, z, out.inverse);
    out.sigmas = sigma_all(frame, out.inverse, config.M);
    return out;
}

nlohmann::json expansion_document(const ExperimentConfig& config, const ThresholdedExpansion& expansion,
                                  const NeedletFrame& frame, const InverseSpectrum& inverse)
{
    nlohmann::json doc = to_json(expansion, frame);
    doc["metadata"] = metadata(config, "expansion");
    doc["excluded_degrees"] = inverse.excluded_degrees();
    return doc;
}

void write_grid(const ExperimentConfig& config, const std::string& experiment, const NeedletSeries& series)
{
    const auto pts = equiangular_grid(config.grid_theta, config.grid_phi);
    const auto vals = series.evaluate(pts);
    auto os = open_output(config.out_dir, "grid.csv");
    write_csv_header(os, metadata(config, experiment));
    os << "theta,phi,value\n" << std::setprecision(17);
    for (std::size_t k = 0; k < pts.size(); ++k) os << pts[k].theta << ',' << pts[k].phi << ',' << vals[k] << '\n';
}

template <class Body>
void for_each_repetition(int reps, Body&& body)
{
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < reps; ++r) {
        try {
            body(r);
        } catch (...) {
            errors[r] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

ExperimentConfig preset_config(const std::string& name)
{
    ExperimentConfig c;
    c.preset = name;
    c.n = 1500;
    c.empirical_noise = true;
    c.repetitions = 20;
    if (name == "table1") {
        c.target = UniformDensity{};
        c.noise = ZAxisUniform{kPi / 8};
        c.kappa0 = {0.08, 0.29, 0.34, 0.38};
        c.M = 1.0;
    } else if (name == "table2") {
        c.target = UniformDensity{};
        c.noise = ZAxisUniform{kPi};
        c.kappa0 = {0.05, 0.17, 0.30, 0.34, 0.38};
        c.M = 1.0;
    } else if (name == "bump-pi8" || name == "bump-pi4" || name == "bump-pi2") {
        c.target = GaussianBump::example2();
        c.M = 1.2732;
        if (name == "bump-pi8") {
            c.noise = ZAxisUniform{kPi / 8};
            c.kappa0 = {0.43};
        } else if (name == "bump-pi4") {
            c.noise = ZAxisUniform{kPi / 4};
            c.kappa0 = {0.46};
        } else {
            c.noise = ZAxisUniform{kPi / 2};
            c.kappa0 = {0.56};
        }
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return c;
}

NoiseModel parse_noise(const std::string& spec)
{
    const std::string s = trim(spec);
    if (s == "none") return ZAxisUniform{0.0};
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("bad noise spec '" + spec + "'");
    const std::string kind = trim(s.substr(0, eq));
    const std::string arg = s.substr(eq + 1);
    if (kind == "a") {
        const double a = config_double("noise", arg);
        if (a < 0.0) throw ConfigError("noise support must be nonnegative");
        return ZAxisUniform{a};
    }
    if (kind == "laplace") {
        const double rho2 = config_double("noise", arg);
        if (!(rho2 > 0.0)) throw ConfigError("laplace rho^2 must be positive");
        return RotationalLaplace{rho2};
    }
    if (kind == "rosenthal") {
        const auto parts = split(arg, ',');
        if (parts.size() != 2) throw ConfigError("rosenthal noise needs <theta>,<p>");
        const double theta = config_double("noise", parts[0]), p = config_double("noise", parts[1]);
        if (!(theta > 0.0 && theta <= kPi) || !(p > 0.0))
            throw ConfigError("rosenthal noise needs theta in (0, pi] and p > 0");
        return Rosenthal{theta, p};
    }
    throw ConfigError("unknown noise kind '" + kind + "'");
}

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& value)
{
    const std::string key = trim(raw_key);
    if (key == "preset") {
        const std::string out = c.out_dir;
        c = preset_config(trim(value));
        c.out_dir = out;
    } else if (key == "target") {
        const std::string t = trim(value);
        if (t == "uniform")
            c.target = UniformDensity{};
        else if (t == "bump")
            c.target = GaussianBump::example2();
        else
            throw ConfigError("unknown target '" + t + "'");
    } else if (key == "noise") {
        c.noise = parse_noise(value);
    } else if (key == "n") {
        const auto n = config_int(key, value);
        if (n < 2) throw ConfigError("n must be at least 2");
        c.n = static_cast<std::size_t>(n);
    } else if (key == "kappa0") {
        c.kappa0.clear();
        for (const auto& part : split(value, ',')) {
            const double k = config_double(key, part);
            if (k < 0.0) throw ConfigError("kappa0 must be nonnegative");
            c.kappa0.push_back(k);
        }
        if (c.kappa0.empty()) throw ConfigError("kappa0 list is empty");
    } else if (key == "J") {
        c.J = static_cast<int>(config_int(key, value));
    } else if (key == "M") {
        c.M = config_double(key, value);
        if (!(c.M > 0.0)) throw ConfigError("M must be positive");
    } else if (key == "seed") {
        const auto s = config_int(key, value);
        if (s < 0) throw ConfigError("seed must be nonnegative");
        c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "reps") {
        const auto r = config_int(key, value);
        if (r < 1) throw ConfigError("reps must be at least 1");
        c.repetitions = static_cast<int>(r);
    } else if (key == "empirical_noise") {
        c.empirical_noise = config_bool(key, value);
    } else if (key == "grid_theta" || key == "grid_phi" || key == "peak_level") {
        const auto v = config_int(key, value);
        if (v < 1 || v > 4096) throw ConfigError(key + " out of range");
        (key == "grid_theta" ? c.grid_theta : key == "grid_phi" ? c.grid_phi : c.peak_level) = static_cast<int>(v);
    } else if (key == "cond_limit") {
        c.cond_limit = config_double(key, value);
    } else if (key == "out") {
        c.out_dir = trim(value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void load_config(ExperimentConfig& config, std::istream& is)
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

int resolve_J(const ExperimentConfig& config)
{
    const int auto_j = select_J(config.n);
    if (!config.J) return auto_j;
    if (*config.J < 0 || *config.J > auto_j)
        throw ConfigError("J = " + std::to_string(*config.J) + " exceeds select_J(N) = " + std::to_string(auto_j));
    return *config.J;
}

nlohmann::json metadata(const ExperimentConfig& config, const std::string& experiment)
{
    nlohmann::json m;
    m["experiment"] = experiment;
    m["version"] = kVersion;
    m["preset"] = config.preset;
    m["seed"] = config.seed;
    m["n"] = config.n;
    m["kappa0"] = config.kappa0;
    m["J"] = resolve_J(config);
    m["noise"] = describe(config.noise);
    m["empirical_noise"] = config.empirical_noise;
    m["M"] = config.M;
    m["target"] = std::holds_alternative<UniformDensity>(config.target) ? "uniform" : "bump";
    m["reps"] = config.repetitions;
    return m;
}

double Example1Result::mean(std::size_t k, int j) const
{
    double acc = 0.0;
    for (const auto& rep : counts[k]) acc += rep[j];
    return counts[k].empty() ? 0.0 : acc / static_cast<double>(counts[k].size());
}

Example1Result run_example1(const ExperimentConfig& config)
{
    if (!std::holds_alternative<UniformDensity>(config.target))
        throw ConfigError("example1 requires the uniform target");
    const ZAxisUniform noise = generative_noise(config);
    const int J = resolve_J(config);
    const NeedletFrame frame(J);

    Example1Result result;
    result.kappa0 = config.kappa0;
    result.J = J;
    result.counts.assign(config.kappa0.size(),
                         std::vector<std::vector<int>>(static_cast<std::size_t>(config.repetitions)));

    for_each_repetition(config.repetitions, [&](int r) {
        Rng rng(config.seed + static_cast<std::uint64_t>(r));
        const auto x = sample_density(config.target, config.n, rng);
        const auto obs = apply_noise(x.points, noise, rng);
        const auto est = estimate_coefficients(config, frame, obs.points, obs.rotations);
        for (std::size_t k = 0; k < config.kappa0.size(); ++k) {
            const auto cfg = EstimatorConfig::make(config.n, J, config.kappa0[k], config.M);
            result.counts[k][r] = survival_counts(threshold(est.beta, est.sigmas, cfg));
        }
    });

    if (!config.out_dir.empty()) {
        const auto meta = metadata(config, "example1");
        {
            auto os = open_output(config.out_dir, "table.csv");
            write_csv_header(os, meta);
            os << "kappa0";
            for (int j = 0; j <= J; ++j) os << ",j" << j;
            os << '\n' << std::setprecision(17);
            for (std::size_t k = 0; k < result.kappa0.size(); ++k) {
                os << result.kappa0[k];
                for (int j = 0; j <= J; ++j) os << ',' << result.mean(k, j);
                os << '\n';
            }
        }
        auto os = open_output(config.out_dir, "survivors.csv");
        write_csv_header(os, meta);
        os << "kappa0,repetition,seed,j,count\n" << std::setprecision(17);
        for (std::size_t k = 0; k < result.kappa0.size(); ++k)
            for (int r = 0; r < config.repetitions; ++r)
                for (int j = 0; j <= J; ++j)
                    os << result.kappa0[k] << ',' << r << ',' << config.seed + r << ',' << j << ','
                       << result.counts[k][r][j] << '\n';
    }
    return result;
}

Example2Result run_example2(const ExperimentConfig& config)
{
    const auto* bump = std::get_if<GaussianBump>(&config.target);
    if (!bump) throw ConfigError("example2 requires the bump target");
    const ZAxisUniform noise = generative_noise(config);
    const int J = resolve_J(config);
    const NeedletFrame frame(J);
    const CubatureSet peak_grid = equal_area_points(config.peak_level);
    const auto cfg = EstimatorConfig::make(config.n, J, config.kappa0.front(), config.M);

    Example2Result result;
    result.J = J;
    result.reports.resize(static_cast<std::size_t>(config.repetitions));

    for_each_repetition(config.repetitions, [&](int r) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
        Rng rng(seed);
        const auto x = sample_density(config.target, config.n, rng);
        const auto obs = apply_noise(x.points, noise, rng);
        const auto est = estimate_coefficients(config, frame, obs.points, obs.rotations);
        const auto expansion = threshold(est.beta, est.sigmas, cfg);
        const auto series = reconstruct(expansion, frame);
        const auto peak = peak_locate(series.evaluate(peak_grid.points()), peak_grid);

        PeakReport& rep = result.reports[r];
        rep.repetition = r;
        rep.seed = seed;
        rep.peak = peak;
        rep.geodesic_error = geodesic_distance(peak, bump->center);
        rep.colatitude_error = std::abs(peak.theta - bump->center.theta);
        rep.counts = survival_counts(expansion);
        rep.excluded_degrees = est.inverse.excluded_degrees();

        if (r == 0 && !config.out_dir.empty()) {
            write_grid(config, "example2", series);
            {
                auto os = open_output(config.out_dir, "expansion.json");
                os << expansion_document(config, expansion, frame, est.inverse).dump(2) << '\n';
            }
            {
                auto os = open_output(config.out_dir, "observations.csv");
                write_csv_header(os, metadata(config, "example2"));
                write_samples_csv(obs.points, os);
            }
            auto os = open_output(config.out_dir, "rotations.csv");
            write_csv_header(os, metadata(config, "example2"));
            write_rotations_csv(obs.rotations, os);
        }
    });

    if (!config.out_dir.empty()) {
        const auto meta = metadata(config, "example2");
        nlohmann::json reports = nlohmann::json::array();
        int geo_ok = 0, colat_ok = 0;
        for (const auto& rep : result.reports) {
            reports.push_back({{"repetition", rep.repetition},
                               {"seed", rep.seed},
                               {"theta_hat", rep.peak.theta},
                               {"phi_hat", rep.peak.phi},
                               {"geodesic_error", rep.geodesic_error},
                               {"colatitude_error", rep.colatitude_error},
                               {"counts", rep.counts},
                               {"excluded_degrees", rep.excluded_degrees}});
            geo_ok += rep.geodesic_error <= 0.2;
            colat_ok += rep.colatitude_error <= 0.2;
        }
        const double reps = static_cast<double>(result.reports.size());
        nlohmann::json doc{{"metadata", meta},
                           {"reports", reports},
                           {"summary",
                            {{"fraction_geodesic_error_le_0.2", geo_ok / reps},
                             {"fraction_colatitude_error_le_0.2", colat_ok / reps}}}};
        {
            auto os = open_output(config.out_dir, "peaks.json");
            os << doc.dump(2) << '\n';
        }
        auto os = open_output(config.out_dir, "survivors.csv");
        write_csv_header(os, meta);
        os << "repetition,seed,j,count\n";
        for (const auto& rep : result.reports)
            for (std::size_t j = 0; j < rep.counts.size(); ++j)
                os << rep.repetition << ',' << rep.seed << ',' << j << ',' << rep.counts[j] << '\n';
    }
    return result;
}

ThresholdedExpansion run_estimate(const ExperimentConfig& base, const std::string& observations_path,
                                  const std::string& rotations_path)
{
    std::ifstream is(observations_path);
    if (!is) throw ConfigError("cannot open observations file " + observations_path);
    const auto z = read_observations_csv(is);
    if (z.size() < 2) throw ConfigError("need at least two observations");

    ExperimentConfig config = base;
    config.n = z.size();
    std::vector<EulerRotation> rotations;
    if (!rotations_path.empty()) {
        std::ifstream rs(rotations_path);
        if (!rs) throw ConfigError("cannot open rotations file " + rotations_path);
        rotations = read_rotations_csv(rs);
        if (rotations.empty()) throw ConfigError("rotations file is empty");
        config.empirical_noise = true;
    } else if (config.empirical_noise) {
        throw ConfigError("empirical noise requested but no rotations file given");
    }

    const int J = resolve_J(config);
    const NeedletFrame frame(J);
    const auto est = estimate_coefficients(config, frame, z, rotations);
    const auto cfg = EstimatorConfig::make(config.n, J, config.kappa0.front(), config.M);
    const auto expansion = threshold(est.beta, est.sigmas, cfg);

    if (!config.out_dir.empty()) {
        {
            auto os = open_output(config.out_dir, "expansion.json");
            os << expansion_document(config, expansion, frame, est.inverse).dump(2) << '\n';
        }
        write_grid(config, "estimate", reconstruct(expansion, frame));
    }
    return expansion;
}

namespace {

template <std::size_t K>
std::vector<std::array<double, K>> read_rows(std::istream& is, const std::string& header)
{
    std::vector<std::array<double, K>> rows;
    std::string line;
    std::size_t lineno = 0;
    bool seen_data = false;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!seen_data && t == header) {
            seen_data = true;
            continue;
        }
        seen_data = true;
        const auto fields = split(t, ',');
        if (fields.size() != K)
            throw ParseError("expected " + std::to_string(K) + " comma-separated values", lineno);
        std::array<double, K> row{};
        for (std::size_t i = 0; i < K; ++i)
            if (!parse_double(fields[i], row[i])) throw ParseError("non-numeric value '" + fields[i] + "'", lineno);
        if constexpr (K == 2) {
            if (row[0] < 0.0 || row[0] > kPi) throw ParseError("theta out of range [0, pi]", lineno);
            if (row[1] < 0.0 || row[1] >= 2.0 * kPi) throw ParseError("phi out of range [0, 2 pi)", lineno);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::vector<SphereDirection> read_observations_csv(std::istream& is)
{
    std::vector<SphereDirection> out;
    for (const auto& r : read_rows<2>(is, "theta,phi")) out.push_back({r[0], r[1]});
    return out;
}

std::vector<EulerRotation> read_rotations_csv(std::istream& is)
{
    std::vector<EulerRotation> out;
    for (const auto& r : read_rows<3>(is, "phi,theta,psi")) out.push_back({r[0], r[1], r[2]});
    return out;
}

void write_rotations_csv(std::span<const EulerRotation> rotations, std::ostream& os)
{
    os << "phi,theta,psi\n" << std::setprecision(17);
    for (const auto& g : rotations) os << g.phi << ',' << g.theta << ',' << g.psi << '\n';
}

std::vector<SphereDirection> equiangular_grid(int n_theta, int n_phi)
{
    std::vector<SphereDirection> out;
    out.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i)
        for (int k = 0; k < n_phi; ++k) out.push_back({(i + 0.5) * kPi / n_theta, 2.0 * kPi * k / n_phi});
    return out;
}

}  // namespace sphdeconv
