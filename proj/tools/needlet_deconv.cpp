#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sphdeconv/cubature.hpp"
#include "sphdeconv/error.hpp"
#include "sphdeconv/experiment.hpp"
#include "sphdeconv/kernels.hpp"
#include "sphdeconv/noise.hpp"

using namespace sphdeconv;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kParse = 3, kNumeric = 4 };

struct CommonOptions {
    std::string preset;
    std::string config_file;
    std::optional<std::string> seed, n, noise, out, reps, J, M;
    std::vector<std::string> kappa0;
    bool empirical_noise = false;
    bool analytic_noise = false;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
    cmd->add_option("--preset", o.preset, "table1, table2, bump-pi8, bump-pi4, bump-pi2");
    cmd->add_option("--config", o.config_file, "key = value configuration file");
    cmd->add_option("--seed", o.seed, "base seed; repetition r uses seed + r");
    cmd->add_option("--n", o.n, "sample size N");
    cmd->add_option("--kappa0", o.kappa0, "threshold constant(s)")->delimiter(',');
    cmd->add_option("--noise", o.noise, "a=<radians>, laplace=<rho2>, rosenthal=<theta>,<p> or none");
    cmd->add_flag("--empirical-noise", o.empirical_noise, "estimate the noise spectrum from the drawn rotations");
    cmd->add_flag("--analytic-noise", o.analytic_noise, "use the closed-form noise spectrum");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--reps", o.reps, "number of repetitions");
    cmd->add_option("--J", o.J, "highest needlet level (at most select_J(N))");
    cmd->add_option("--M", o.M, "sup-norm bound used in the threshold");
    cmd->add_option("--threads", o.threads, "OpenMP threads (0 = runtime default)");
}

ExperimentConfig build_config(const CommonOptions& o, const std::string& default_preset)
{
    ExperimentConfig c = o.preset.empty() && default_preset.empty() ? ExperimentConfig{}
                                                                     : preset_config(o.preset.empty() ? default_preset : o.preset);
    if (!o.config_file.empty()) {
        std::ifstream is(o.config_file);
        if (!is) throw ConfigError("cannot open config file " + o.config_file);
        load_config(c, is);
    }
    auto set = [&](const char* key, const std::optional<std::string>& v) {
        if (v) apply_setting(c, key, *v);
    };
    set("seed", o.seed);
    set("n", o.n);
    set("noise", o.noise);
    set("out", o.out);
    set("reps", o.reps);
    set("J", o.J);
    set("M", o.M);
    if (!o.kappa0.empty()) {
        std::string joined;
        for (const auto& k : o.kappa0) joined += (joined.empty() ? "" : ",") + k;
        apply_setting(c, "kappa0", joined);
    }
    if (o.empirical_noise && o.analytic_noise) throw ConfigError("--empirical-noise and --analytic-noise conflict");
    if (o.empirical_noise) c.empirical_noise = true;
    if (o.analytic_noise) c.empirical_noise = false;
    if (o.threads > 0) kernels::set_threads(o.threads);
    resolve_J(c);
    return c;
}

void print_example1(const Example1Result& r)
{
    std::printf("kappa0");
    for (int j = 0; j <= r.J; ++j) std::printf("\tj=%d", j);
    std::printf("\n");
    for (std::size_t k = 0; k < r.kappa0.size(); ++k) {
        std::printf("%.2f", r.kappa0[k]);
        for (int j = 0; j <= r.J; ++j) std::printf("\t%.2f", r.mean(k, j));
        std::printf("\n");
    }
}

void print_example2(const Example2Result& r)
{
    int geo = 0, colat = 0;
    std::printf("rep\tseed\ttheta_hat\tphi_hat\tgeodesic\tcolatitude\n");
    for (const auto& p : r.reports) {
        std::printf("%d\t%llu\t%.4f\t%.4f\t%.4f\t%.4f\n", p.repetition, static_cast<unsigned long long>(p.seed),
                    p.peak.theta, p.peak.phi, p.geodesic_error, p.colatitude_error);
        geo += p.geodesic_error <= 0.2;
        colat += p.colatitude_error <= 0.2;
    }
    const double n = static_cast<double>(r.reports.size());
    std::printf("J = %d, geodesic error <= 0.2 in %.2f of runs, colatitude error <= 0.2 in %.2f\n", r.J, geo / n,
                colat / n);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Needlet deconvolution of spherical densities under rotational noise"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonOptions e1_opts, e2_opts, est_opts;
    auto* e1 = app.add_subcommand("example1", "uniform target: survivor counts per level");
    add_common(e1, e1_opts);
    auto* e2 = app.add_subcommand("example2", "bump target: reconstruction and peak location");
    add_common(e2, e2_opts);

    auto* est = app.add_subcommand("estimate", "threshold estimate from an observations file");
    add_common(est, est_opts);
    std::string obs_path, rot_path;
    est->add_option("--observations", obs_path, "CSV with theta,phi rows")->required();
    est->add_option("--rotations", rot_path, "CSV with phi,theta,psi rows for the empirical noise spectrum");

    auto* cub = app.add_subcommand("cubature", "export a cubature set as CSV");
    std::string scheme = "equal-area", cub_out;
    int level = 3;
    cub->add_option("--scheme", scheme, "equal-area or gauss")->check(CLI::IsMember({"equal-area", "gauss"}));
    cub->add_option("--level", level, "equal-area level j, or Gauss degree L");
    cub->add_option("--out", cub_out, "output file (default stdout)");

    auto* ns = app.add_subcommand("noise-spectrum", "export per-degree noise blocks as JSON");
    std::string ns_noise = "a=0.39269908169872414", ns_out;
    int ns_degree = 7;
    ns->add_option("--noise", ns_noise, "noise model");
    ns->add_option("--L", ns_degree, "highest degree");
    ns->add_option("--out", ns_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*e1) {
            const auto cfg = build_config(e1_opts, "table1");
            print_example1(run_example1(cfg));
        } else if (*e2) {
            const auto cfg = build_config(e2_opts, "bump-pi8");
            print_example2(run_example2(cfg));
        } else if (*est) {
            const auto cfg = build_config(est_opts, "");
            const auto expansion = run_estimate(cfg, obs_path, rot_path);
            std::printf("%zu surviving coefficients\n", expansion.surviving.size());
        } else if (*cub) {
            const CubatureSet set = scheme == "gauss" ? gauss_product_grid(level) : equal_area_points(level);
            if (cub_out.empty()) {
                write_csv(set, std::cout);
            } else {
                std::ofstream os(cub_out);
                if (!os) throw ConfigError("cannot open " + cub_out);
                write_csv(set, os);
            }
        } else if (*ns) {
            if (ns_degree < 0) throw ConfigError("--L must be nonnegative");
            const auto doc = to_json(noise_spectrum(parse_noise(ns_noise), ns_degree)).dump(2);
            if (ns_out.empty()) {
                std::cout << doc << '\n';
            } else {
                std::ofstream os(ns_out);
                if (!os) throw ConfigError("cannot open " + ns_out);
                os << doc << '\n';
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const IllConditionedDegree& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const DomainError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kOk;
}
