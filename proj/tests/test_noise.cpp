#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "sphdeconv/error.hpp"
#include "sphdeconv/noise.hpp"

using namespace sphdeconv;

namespace {

std::vector<EulerRotation> zaxis_sample(double a, std::size_t n, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<EulerRotation> out(n);
    for (auto& g : out) g = sample_rotation(ZAxisUniform{a}, rng);
    return out;
}

double max_offdiag(const Eigen::MatrixXcd& m)
{
    double worst = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (r != c) worst = std::max(worst, std::abs(m(r, c)));
    return worst;
}

}  // namespace

TEST_CASE("analytic spectra examples")
{
    const auto lap = noise_spectrum(RotationalLaplace{1.0}, 4);
    CHECK(lap(2, 0, 0).real() == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
    CHECK(lap(2, -2, -2).real() == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
    const auto ros = noise_spectrum(Rosenthal{kPi / 2, 1.0}, 3);
    CHECK(ros(1, 1, 1).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    const auto ros2 = noise_spectrum(Rosenthal{1.1, 2.0}, 5);
    for (int l = 0; l <= 5; ++l) {
        const double ref = std::pow(std::sin((l + 0.5) * 1.1) / ((2 * l + 1) * std::sin(0.55)), 2.0);
        CHECK(ros2(l, 0, 0).real() == doctest::Approx(ref).epsilon(1e-14));
    }
    CHECK_NOTHROW(noise_spectrum(Rosenthal{0.4, 2.5}, 5));
    CHECK_THROWS_AS(noise_spectrum(Rosenthal{1.1, 2.5}, 5), DomainError);
    CHECK_THROWS_AS(noise_spectrum(Rosenthal{0.0, 1.0}, 3), DomainError);
    CHECK_THROWS_AS(noise_spectrum(Rosenthal{1.0, 0.0}, 3), DomainError);
    CHECK_THROWS_AS(noise_spectrum(RotationalLaplace{0.0}, 3), DomainError);
}

TEST_CASE("z-axis uniform factor")
{
    const double a = kPi / 8;
    // Midpoint rule on e^{-i phi} over [0, a].
    const int steps = 200000;
    cplx integral{0.0, 0.0};
    for (int k = 0; k < steps; ++k) integral += std::polar(1.0, -(k + 0.5) * a / steps);
    integral /= static_cast<double>(steps);
    CHECK(std::abs(zaxis_uniform_factor(1, a) - integral) <= 1e-10);
    CHECK(std::abs(zaxis_uniform_factor(1, a)) == doctest::Approx(0.993587).epsilon(1e-6));
    for (int m = -6; m <= 6; ++m) {
        if (m == 0) continue;
        const cplx ref = (1.0 - std::polar(1.0, -m * a)) / cplx(0.0, m * a);
        CHECK(std::abs(zaxis_uniform_factor(m, a) - ref) <= 1e-14);
    }
    CHECK(zaxis_uniform_factor(0, a) == cplx(1.0, 0.0));
    CHECK(zaxis_uniform_factor(3, 0.0) == cplx(1.0, 0.0));
}

TEST_CASE("spectra have unit mass and diagonal analytic blocks")
{
    for (const NoiseModel& model :
         {NoiseModel{ZAxisUniform{0.7}}, NoiseModel{RotationalLaplace{0.3}}, NoiseModel{Rosenthal{2.0, 2.0}}}) {
        const auto spec = noise_spectrum(model, 6);
        CHECK(spec.block(0)(0, 0) == cplx(1.0, 0.0));
        for (int l = 0; l <= 6; ++l) CHECK(max_offdiag(spec.block(l)) == 0.0);
    }
    const auto emp = noise_spectrum(EmpiricalNoise{zaxis_sample(kPi / 8, 3000, 4)}, 4);
    CHECK(std::abs(emp.block(0)(0, 0) - 1.0) <= 1e-12);
    CHECK_THROWS_AS(noise_spectrum(EmpiricalNoise{}, 2), PreconditionError);
}

TEST_CASE("empirical spectrum of general rotations")
{
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<EulerRotation> rot(50);
    for (auto& g : rot) g = {2 * kPi * u(gen), kPi * u(gen), 2 * kPi * u(gen)};
    const auto emp = noise_spectrum(EmpiricalNoise{rot}, 3);
    for (int l = 0; l <= 3; ++l) {
        Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(2 * l + 1, 2 * l + 1);
        for (const auto& g : rot) ref += wigner_D_matrix(l, g);
        ref /= 50.0;
        CHECK((emp.block(l) - ref).cwiseAbs().maxCoeff() <= 1e-13);
    }
}

TEST_CASE("inverse blocks")
{
    const auto lap = noise_spectrum(RotationalLaplace{1.0}, 3);
    CHECK(inverse_block(lap, 2)(1, 1).real() == doctest::Approx(7.0).epsilon(1e-14));
    const auto id = noise_spectrum(ZAxisUniform{0.0}, 3);
    for (int l = 0; l <= 3; ++l) CHECK(inverse_block(id, l) == Eigen::MatrixXcd::Identity(2 * l + 1, 2 * l + 1));

    const auto emp = noise_spectrum(EmpiricalNoise{zaxis_sample(kPi / 8, 5000, 11)}, 3);
    const auto inv = inverse_block(emp, 3);
    for (int m = -3; m <= 3; ++m) {
        const cplx ref = 1.0 / zaxis_uniform_factor(m, kPi / 8);
        CHECK(std::abs(inv(m + 3, m + 3) - ref) <= 0.1 * std::abs(ref));
    }
    CHECK(max_offdiag(inv) <= 0.1);
}

TEST_CASE("ill-conditioned degrees are reported and excluded")
{
    const auto spec = noise_spectrum(ZAxisUniform{kPi}, 5);
    CHECK_THROWS_AS(inverse_block(spec, 2), IllConditionedDegree);
    try {
        inverse_block(spec, 4);
    } catch (const IllConditionedDegree& e) {
        CHECK(e.degree() == 4);
    }
    const auto inv = invert(spec);
    CHECK(inv.excluded_degrees() == std::vector<int>{2, 3, 4, 5});
    CHECK_FALSE(inv.excluded(1));
    CHECK(inv.excluded(3));
    CHECK(inv.block(3).size() == 0);
    CHECK(inv.block(1).rows() == 3);
    CHECK_THROWS_AS(inv.block(6), DomainError);
    CHECK(block_condition(noise_spectrum(RotationalLaplace{1.0}, 3), 3) == doctest::Approx(1.0));
    const double a = 1.3;
    const double ref = std::abs(zaxis_uniform_factor(0, a)) / std::abs(zaxis_uniform_factor(4, a));
    CHECK(block_condition(noise_spectrum(ZAxisUniform{a}, 4), 4) == doctest::Approx(ref).epsilon(1e-14));
}

TEST_CASE("operator norms")
{
    const auto lap = noise_spectrum(RotationalLaplace{1.0}, 3);
    CHECK(op_norm(lap, 2) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
    CHECK(op_norm(noise_spectrum(ZAxisUniform{0.0}, 2), 2) == 1.0);
    const auto z = noise_spectrum(ZAxisUniform{1.3}, 4);
    double ref = 0.0;
    for (int m = -4; m <= 4; ++m) ref = std::max(ref, std::abs(zaxis_uniform_factor(m, 1.3)));
    CHECK(op_norm(z, 4) == doctest::Approx(ref).epsilon(1e-15));

    std::mt19937_64 gen(2);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd b(5, 5);
    for (Eigen::Index r = 0; r < 5; ++r)
        for (Eigen::Index c = 0; c < 5; ++c) b(r, c) = {g(gen), g(gen)};
    const RotationalSpectrum spec({Eigen::MatrixXcd::Identity(1, 1), Eigen::MatrixXcd::Identity(3, 3), b});
    CHECK(std::abs(op_norm(spec, 2) - oracle::power_iteration_norm(b)) <= 1e-8);
    CHECK_THROWS_AS(RotationalSpectrum({Eigen::MatrixXcd::Identity(2, 2)}), PreconditionError);
}

TEST_CASE("degree of ill-posedness")
{
    const auto lap = noise_spectrum(RotationalLaplace{1.0}, 64);
    const auto d = dip_estimate(lap, 4, 64);
    CHECK(std::abs(d.nu - 2.0) <= 0.1);
    const auto id = dip_estimate(noise_spectrum(ZAxisUniform{0.0}, 64), 4, 64);
    CHECK(std::abs(id.nu) <= 1e-8);
    const auto z = dip_estimate(noise_spectrum(ZAxisUniform{kPi / 8}, 64), 4, 30);
    CHECK(std::isfinite(z.nu));
    CHECK(z.fit_residual >= 0.0);
    MESSAGE("z-axis pi/8 slope " << z.nu << " residual " << z.fit_residual);
    CHECK_THROWS_AS(dip_estimate(lap, 4, 5), PreconditionError);
    std::vector<Eigen::MatrixXcd> blocks;
    for (int l = 0; l <= 5; ++l) blocks.push_back(Eigen::MatrixXcd::Identity(2 * l + 1, 2 * l + 1));
    blocks[4](2, 2) = 0.0;
    CHECK_THROWS_AS(dip_estimate(RotationalSpectrum(blocks), 1, 5), IllConditionedDegree);
}

TEST_CASE("rotation sampling")
{
    Rng rng(5);
    const double a = kPi / 8;
    const int n = 100000;
    double mean = 0.0;
    for (int k = 0; k < n; ++k) {
        const auto g = sample_rotation(ZAxisUniform{a}, rng);
        CHECK(g.phi >= 0.0);
        CHECK(g.phi < a);
        CHECK(g.theta == 0.0);
        CHECK(g.psi == 0.0);
        mean += g.phi;
        if (k < 10) {
            const Vec3 z = g.apply(Vec3{0.0, 0.0, 1.0});
            CHECK(z == Vec3{0.0, 0.0, 1.0});
        }
    }
    mean /= n;
    CHECK(std::abs(mean - a / 2) <= 3 * (a / std::sqrt(12.0)) / std::sqrt(n));
    CHECK_THROWS_AS(sample_rotation(RotationalLaplace{1.0}, rng), PreconditionError);
}

TEST_CASE("empirical spectra converge at the Monte Carlo rate")
{
    const auto exact = noise_spectrum(ZAxisUniform{kPi / 4}, 4);
    auto rms_error = [&](std::size_t n) {
        double acc = 0.0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const auto emp = noise_spectrum(EmpiricalNoise{zaxis_sample(kPi / 4, n, seed * 7919 + n)}, 4);
            for (int l = 1; l <= 4; ++l) acc += (emp.block(l) - exact.block(l)).squaredNorm();
        }
        return std::sqrt(acc);
    };
    const double ratio = rms_error(8000) / rms_error(4000);
    CHECK(ratio >= 0.5 / std::sqrt(2.0));
    CHECK(ratio <= 1.5 / std::sqrt(2.0));
}

TEST_CASE("json export")
{
    const auto j = to_json(noise_spectrum(RotationalLaplace{1.0}, 2));
    CHECK(j["max_degree"] == 2);
    CHECK(j["blocks"].size() == 3);
    CHECK(j["blocks"][2].size() == 5);
    CHECK(j["blocks"][2][0][0][0].get<double>() == doctest::Approx(1.0 / 7.0));
    CHECK(j["blocks"][2][0][1][1].get<double>() == 0.0);
    CHECK(describe(ZAxisUniform{0.5}) == "zaxis(a=0.5)");
}
