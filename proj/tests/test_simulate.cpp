#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "sphdeconv/error.hpp"
#include "sphdeconv/estimator.hpp"
#include "sphdeconv/needlet.hpp"
#include "sphdeconv/simulate.hpp"

using namespace sphdeconv;

namespace {

// P(<w, c> <= t) for the bump with scale 4: exp(-8(1 - t)) normalised on [-1, 1].
double bump_cdf(double t) { return (std::exp(-8.0 * (1.0 - t)) - std::exp(-16.0)) / (1.0 - std::exp(-16.0)); }

double bump_quantile(double q) { return 1.0 + std::log(q * (1.0 - std::exp(-16.0)) + std::exp(-16.0)) / 8.0; }

double chi_square(const std::vector<std::size_t>& counts, double expected)
{
    double s = 0.0;
    for (auto c : counts) s += (double(c) - expected) * (double(c) - expected) / expected;
    return s;
}

}  // namespace

TEST_CASE("target densities")
{
    const SphereDirection north{0.0, 0.0};
    CHECK(density_eval(UniformDensity{}, north) == 1.0 / kFourPi);
    const GaussianBump b = GaussianBump::example2();
    CHECK(b.center.theta == kPi / 2);
    CHECK(b.center.phi == kPi / 2);
    CHECK(density_eval(b, b.center) == doctest::Approx(1.2732).epsilon(1e-4));
    CHECK(sup_norm(b) == density_eval(b, b.center));
    CHECK(density_eval(b, SphereDirection{kPi / 2, 3 * kPi / 2}) == doctest::Approx(b.amplitude * std::exp(-16.0)));
    CHECK(density_eval(b, north) == doctest::Approx(b.amplitude * std::exp(-8.0)).epsilon(1e-13));

    const auto grid = gauss_product_grid(48);
    const double mass = grid.integrate([&](const SphereDirection& x) { return density_eval(b, x); });
    CHECK(std::abs(mass - kPi / 4 * (1.0 - std::exp(-16.0)) / 0.7854) <= 1e-12);
    CHECK(std::abs(mass - 1.0) <= 1e-5);
    CHECK(std::abs(grid.integrate([](const SphereDirection& x) { return density_eval(UniformDensity{}, x); }) - 1.0) <= 1e-13);
}

TEST_CASE("uniform sampling moments and determinism")
{
    Rng rng(17);
    const std::size_t n = 200000;
    const auto s = sample_density(UniformDensity{}, n, rng);
    CHECK(s.points.size() == n);
    CHECK(s.acceptance_rate == 1.0);
    double z = 0.0, z2 = 0.0, phi = 0.0;
    for (const auto& p : s.points) {
        REQUIRE(p.theta >= 0.0);
        REQUIRE(p.theta <= kPi);
        REQUIRE(p.phi >= 0.0);
        REQUIRE(p.phi < 2 * kPi);
        const double c = std::cos(p.theta);
        z += c;
        z2 += c * c;
        phi += p.phi;
    }
    const double se = 1.0 / std::sqrt(double(n));
    CHECK(std::abs(z / n) <= 4 * se / std::sqrt(3.0));
    CHECK(std::abs(z2 / n - 1.0 / 3.0) <= 4 * se * std::sqrt(4.0 / 45.0));
    CHECK(std::abs(phi / n - kPi) <= 4 * se * 2 * kPi / std::sqrt(12.0));

    Rng a(5), b(5);
    const auto x = sample_density(GaussianBump{}, 300, a).points;
    const auto y = sample_density(GaussianBump{}, 300, b).points;
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(x[i].theta == y[i].theta);
        CHECK(x[i].phi == y[i].phi);
    }
    Rng c(5);
    CHECK_THROWS_AS(sample_density(UniformDensity{}, 0, c), DomainError);
}

TEST_CASE("rejection sampler reproduces the bump law")
{
    Rng rng(99);
    const std::size_t n = 20000, bins = 20;
    const GaussianBump bump;
    const auto s = sample_density(bump, n, rng);
    const Vec3 c = bump.center.unit_vector();
    std::vector<std::size_t> counts(bins, 0);
    std::vector<double> edges;
    for (std::size_t k = 1; k < bins; ++k) edges.push_back(bump_quantile(double(k) / bins));
    CHECK(bump_cdf(edges[4]) == doctest::Approx(0.25));
    for (const auto& p : s.points) {
        const double t = dot(p.unit_vector(), c);
        counts[std::upper_bound(edges.begin(), edges.end(), t) - edges.begin()]++;
    }
    // 0.999 quantile of chi-square with 19 degrees of freedom
    CHECK(chi_square(counts, double(n) / bins) <= 43.82);

    const double p_accept = kPi / 4 * (1.0 - std::exp(-16.0)) / 0.7854 / (kFourPi * bump.amplitude);
    const double proposals = double(n) / s.acceptance_rate;
    CHECK(std::abs(s.acceptance_rate - p_accept) <= 4 * std::sqrt(p_accept * (1 - p_accept) / proposals));
}

TEST_CASE("z-axis noise application")
{
    Rng rng(7);
    const auto x = sample_density(UniformDensity{}, 5000, rng).points;
    const double a = kPi / 4;
    const auto obs = apply_noise(x, ZAxisUniform{a}, rng);
    REQUIRE(obs.points.size() == x.size());
    REQUIRE(obs.rotations.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(obs.points[i].theta == x[i].theta);
        CHECK(obs.rotations[i].theta == 0.0);
        CHECK(obs.rotations[i].phi >= 0.0);
        CHECK(obs.rotations[i].phi <= a);
        const double shift = std::fmod(obs.points[i].phi - x[i].phi + 2 * kPi, 2 * kPi);
        CHECK(std::min(std::abs(shift - obs.rotations[i].phi), 2 * kPi - std::abs(shift - obs.rotations[i].phi)) <= 1e-12);
    }

    const auto tiny = apply_noise(x, ZAxisUniform{1e-12}, rng);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(geodesic_distance(tiny.points[i], x[i]) <= 1e-11);

    const auto none = apply_noise(x, ZAxisUniform{0.0}, rng);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(none.points[i].phi == x[i].phi);

    CHECK_THROWS_AS(apply_noise(x, RotationalLaplace{1.0}, rng), PreconditionError);
}

TEST_CASE("observation spectrum is the convolution of target and noise")
{
    const double a = kPi / 2;
    const std::size_t n = 200000;
    Rng rng(31);
    const auto x = sample_density(GaussianBump{}, n, rng).points;
    const auto z = apply_noise(x, ZAxisUniform{a}, rng).points;

    const auto grid = gauss_product_grid(40);
    std::vector<double> f(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) f[k] = density_eval(GaussianBump{}, grid.point(k));
    const auto exact = spherical_transform(grid, f, 2);

    for (int l = 1; l <= 2; ++l)
        for (int m = -l; m <= l; ++m) {
            cplx mean{0.0, 0.0};
            double second = 0.0;
            for (const auto& p : z) {
                const cplx y = std::conj(sph_harm(l, m, p));
                mean += y;
                second += std::norm(y);
            }
            mean /= double(n);
            const double se = std::sqrt(second / double(n) / double(n));
            const cplx expected = zaxis_uniform_factor(m, a) * exact(l, m);
            CHECK(std::abs(mean - expected) <= 4 * se);
        }
}

TEST_CASE("peak location")
{
    const auto grid = equal_area_points(2);
    const std::vector<double> flat(grid.size(), 3.0);
    const auto first = peak_locate(flat, grid);
    CHECK(first.theta == grid.point(0).theta);
    CHECK(first.phi == grid.point(0).phi);
    std::vector<double> two(grid.size(), 0.0);
    two[7] = two[30] = 1.0;
    CHECK(peak_locate(two, grid).phi == grid.point(7).phi);
    CHECK_THROWS_AS(peak_locate(std::vector<double>(3, 0.0), grid), PreconditionError);

    const GaussianBump bump;
    const auto fine = equal_area_points(4);
    const auto p = peak_locate([&](const SphereDirection& x) { return density_eval(bump, x); }, fine);
    CHECK(geodesic_distance(p, bump.center) <= 0.1);

    const NeedletFrame frame(3);
    for (std::size_t eta : {std::size_t{0}, std::size_t{100}, std::size_t{500}}) {
        const auto q = peak_locate([&](const SphereDirection& x) { return atom_eval(frame, 3, eta, x); }, fine);
        CHECK(geodesic_distance(q, frame.atom(3, eta).center) <= 0.1);
    }
}

TEST_CASE("lp errors")
{
    const auto grid = gauss_product_grid(8);
    const Evaluator one = [](const SphereDirection&) { return 1.0; };
    const Evaluator zero = [](const SphereDirection&) { return 0.0; };
    CHECK(lp_error(one, zero, 2.0, grid) == doctest::Approx(std::sqrt(kFourPi)).epsilon(1e-13));
    CHECK(lp_error(one, zero, 1.0, grid) == doctest::Approx(kFourPi).epsilon(1e-13));
    CHECK(lp_error(one, zero, INFINITY, grid) == 1.0);
    CHECK(lp_error(one, one, 2.0, grid) == 0.0);
    CHECK_THROWS_AS(lp_error(one, zero, 0.5, grid), DomainError);
    const Evaluator quarter = [](const SphereDirection&) { return 0.25 / kFourPi + 1.0 / kFourPi; };
    CHECK(lp_error(quarter, TargetDensity{UniformDensity{}}, 1.0, grid) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("sample csv")
{
    std::ostringstream os;
    const std::vector<SphereDirection> pts{{0.5, 1.0}, {kPi, 0.0}};
    write_samples_csv(pts, os);
    CHECK(os.str().rfind("theta,phi\n0.5,1\n", 0) == 0);
    std::istringstream is(os.str());
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) ++lines;
    CHECK(lines == 3);
}
