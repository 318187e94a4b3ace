#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "sphdeconv/error.hpp"
#include "sphdeconv/experiment.hpp"

using namespace sphdeconv;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("sphdeconv_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::size_t data_lines(const fs::path& p)
{
    std::ifstream is(p);
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') ++n;
    return n;
}

double total_mean(const Example1Result& r, std::size_t k)
{
    double s = 0.0;
    for (int j = 0; j <= r.J; ++j) s += r.mean(k, j);
    return s;
}

}  // namespace

TEST_CASE("presets")
{
    const auto t1 = preset_config("table1");
    CHECK(std::holds_alternative<UniformDensity>(t1.target));
    CHECK(std::get<ZAxisUniform>(t1.noise).a == kPi / 8);
    CHECK(t1.kappa0 == std::vector<double>{0.08, 0.29, 0.34, 0.38});
    CHECK(t1.n == 1500);
    CHECK(resolve_J(t1) == 3);
    const auto t2 = preset_config("table2");
    CHECK(std::get<ZAxisUniform>(t2.noise).a == kPi);
    CHECK(t2.kappa0 == std::vector<double>{0.05, 0.17, 0.30, 0.34, 0.38});
    const auto b8 = preset_config("bump-pi8"), b4 = preset_config("bump-pi4"), b2 = preset_config("bump-pi2");
    CHECK(b8.kappa0.front() == 0.43);
    CHECK(b4.kappa0.front() == 0.46);
    CHECK(b2.kappa0.front() == 0.56);
    CHECK(std::get<ZAxisUniform>(b2.noise).a == kPi / 2);
    CHECK(b8.M == 1.2732);
    CHECK(std::holds_alternative<GaussianBump>(b4.target));
    CHECK_THROWS_AS(preset_config("table3"), ConfigError);
}

TEST_CASE("noise specifications")
{
    CHECK(std::get<ZAxisUniform>(parse_noise("a=0.5")).a == 0.5);
    CHECK(std::get<ZAxisUniform>(parse_noise(" none ")).a == 0.0);
    CHECK(std::get<RotationalLaplace>(parse_noise("laplace=2")).rho2 == 2.0);
    const auto r = std::get<Rosenthal>(parse_noise("rosenthal=1.5,2"));
    CHECK(r.theta == 1.5);
    CHECK(r.p == 2.0);
    for (const char* bad : {"a", "a=-1", "a=x", "laplace=0", "rosenthal=1", "rosenthal=4,1", "gauss=1", "a=nan"})
        CHECK_THROWS_AS(parse_noise(bad), ConfigError);
}

TEST_CASE("config files")
{
    ExperimentConfig c;
    std::istringstream is("# experiment\npreset = bump-pi4\n\nn = 2000   # more samples\nkappa0 = 0.1, 0.2\n"
                          "seed=9\nreps = 3\nempirical_noise = false\nJ = 2\nM = 2.5\nout = /tmp/x\n");
    load_config(c, is);
    CHECK(c.preset == "bump-pi4");
    CHECK(c.n == 2000);
    CHECK(c.kappa0 == std::vector<double>{0.1, 0.2});
    CHECK(c.seed == 9);
    CHECK(c.repetitions == 3);
    CHECK_FALSE(c.empirical_noise);
    CHECK(resolve_J(c) == 2);
    CHECK(c.M == 2.5);
    CHECK(c.out_dir == "/tmp/x");

    for (const auto& [text, line] : std::vector<std::pair<std::string, int>>{
             {"n = 100\nbogus = 1\n", 2}, {"\n\nn = 1\n", 3}, {"kappa0 = -1\n", 1}, {"M = 0\n", 1}, {"reps\n", 1}}) {
        ExperimentConfig d;
        std::istringstream in(text);
        try {
            load_config(d, in);
            FAIL("expected ConfigError for: " << text);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("config line " + std::to_string(line)) == 0);
        }
    }

    ExperimentConfig big = preset_config("table1");
    big.J = 4;
    CHECK_THROWS_AS(resolve_J(big), ConfigError);
    big.J = -1;
    CHECK_THROWS_AS(resolve_J(big), ConfigError);
}

TEST_CASE("observation and rotation files")
{
    std::istringstream bad("# comment\ntheta,phi\n0.1,0.2\n0.3,0.4\n\n0.5,0.6\n3.5,0.1\n");
    try {
        read_observations_csv(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 7);
        CHECK(std::string(e.what()).find("line 7") == 0);
    }
    std::istringstream text("theta,phi\n0.1,x\n");
    CHECK_THROWS_AS(read_observations_csv(text), ParseError);
    std::istringstream three("0.1,0.2,0.3\n");
    CHECK_THROWS_AS(read_observations_csv(three), ParseError);
    std::istringstream wrap("0.1,6.3\n");
    CHECK_THROWS_AS(read_observations_csv(wrap), ParseError);
    std::istringstream ok("0,0\n3.141592653589793,6.28\n");
    CHECK(read_observations_csv(ok).size() == 2);

    const std::vector<EulerRotation> g{{0.1, 0.2, 0.3}, {1.0 / 3.0, kPi, 2.0 / 7.0}};
    std::stringstream ss;
    write_rotations_csv(g, ss);
    const auto back = read_rotations_csv(ss);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].phi == g[i].phi);
        CHECK(back[i].theta == g[i].theta);
        CHECK(back[i].psi == g[i].psi);
    }

    const auto grid = equiangular_grid(3, 4);
    REQUIRE(grid.size() == 12);
    CHECK(grid[0].theta == doctest::Approx(kPi / 6));
    CHECK(grid[5].theta == doctest::Approx(kPi / 2));
    CHECK(grid[5].phi == doctest::Approx(kPi / 2));
}

TEST_CASE("estimate with an overwhelming threshold returns the constant")
{
    const auto dir = scratch("const");
    {
        std::ofstream os(dir / "obs.csv");
        os << "theta,phi\n";
        for (int i = 0; i < 12; ++i) os << 0.2 + 0.2 * i << ',' << 0.5 * i << '\n';
    }
    ExperimentConfig c;
    c.kappa0 = {1e9};
    c.grid_theta = 6;
    c.grid_phi = 8;
    c.out_dir = (dir / "out").string();
    const auto e = run_estimate(c, (dir / "obs.csv").string());
    CHECK(e.surviving.empty());
    CHECK(e.config.n == 12);
    CHECK(e.config.J == 0);
    std::ifstream grid(dir / "out" / "grid.csv");
    std::string line;
    std::size_t rows = 0;
    bool header = false;
    while (std::getline(grid, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            CHECK(line == "theta,phi,value");
            header = true;
            continue;
        }
        ++rows;
        CHECK(std::stod(line.substr(line.rfind(',') + 1)) == doctest::Approx(1.0 / kFourPi).epsilon(1e-15));
    }
    CHECK(rows == 48);

    c.empirical_noise = true;
    CHECK_THROWS_AS(run_estimate(c, (dir / "obs.csv").string()), ConfigError);
    CHECK_THROWS_AS(run_estimate(ExperimentConfig{}, (dir / "missing.csv").string()), ConfigError);
}

TEST_CASE("example 2 outputs, determinism and estimate round trip")
{
    auto c = preset_config("bump-pi8");
    c.repetitions = 2;
    c.grid_theta = 30;
    c.grid_phi = 60;
    c.peak_level = 4;
    const auto a = scratch("ex2a"), b = scratch("ex2b");
    c.out_dir = a.string();
    const auto ra = run_example2(c);
    c.out_dir = b.string();
    run_example2(c);

    REQUIRE(ra.reports.size() == 2);
    CHECK(ra.J == 3);
    CHECK(ra.reports[1].seed == c.seed + 1);
    for (const char* f : {"peaks.json", "survivors.csv", "grid.csv", "expansion.json", "observations.csv", "rotations.csv"}) {
        REQUIRE(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(data_lines(a / "grid.csv") == 30 * 60 + 1);
    CHECK(data_lines(a / "observations.csv") == 1501);
    CHECK(data_lines(a / "rotations.csv") == 1501);
    CHECK(data_lines(a / "survivors.csv") == 2 * 4 + 1);

    const auto peaks = nlohmann::json::parse(slurp(a / "peaks.json"));
    CHECK(peaks["metadata"]["seed"] == c.seed);
    CHECK(peaks["metadata"]["experiment"] == "example2");
    CHECK(peaks["metadata"]["version"] == kVersion);
    CHECK(peaks["reports"].size() == 2);
    CHECK(peaks["reports"][0]["geodesic_error"].get<double>() == ra.reports[0].geodesic_error);
    const std::string head = slurp(a / "grid.csv").substr(0, 200);
    CHECK(head.find("# seed=1") != std::string::npos);

    auto e = preset_config("bump-pi8");
    e.out_dir = (a / "estimate").string();
    run_estimate(e, (a / "observations.csv").string(), (a / "rotations.csv").string());
    const auto original = nlohmann::json::parse(slurp(a / "expansion.json"));
    const auto again = nlohmann::json::parse(slurp(a / "estimate" / "expansion.json"));
    CHECK(original["terms"] == again["terms"]);
    CHECK(original["constant"] == again["constant"]);
    CHECK(original["terms"].size() > 0);

    auto uniform = c;
    uniform.target = UniformDensity{};
    CHECK_THROWS_AS(run_example2(uniform), ConfigError);
    auto lap = c;
    lap.noise = RotationalLaplace{1.0};
    CHECK_THROWS_AS(run_example2(lap), ConfigError);
}

TEST_CASE("example 1 outputs and empirical versus analytic noise")
{
    auto c = preset_config("table1");
    c.kappa0 = {0.08};
    c.repetitions = 10;
    const auto dir = scratch("ex1");
    c.out_dir = dir.string();
    const auto empirical = run_example1(c);
    CHECK(data_lines(dir / "table.csv") == 2);
    CHECK(data_lines(dir / "survivors.csv") == 10 * 4 + 1);
    CHECK(slurp(dir / "table.csv").find("# experiment=example1") != std::string::npos);

    c.empirical_noise = false;
    c.out_dir.clear();
    const auto analytic = run_example1(c);
    const double me = total_mean(empirical, 0), ma = total_mean(analytic, 0);
    MESSAGE("mean survivors: empirical " << me << ", analytic " << ma);
    CHECK(me > 0.0);
    CHECK(std::abs(me - ma) <= 0.2 * ma);

    auto bump = c;
    bump.target = GaussianBump::example2();
    CHECK_THROWS_AS(run_example1(bump), ConfigError);
}
