#include "sphdeconv/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "sphdeconv/error.hpp"

namespace sphdeconv {

namespace {

SphereDirection uniform_direction(Rng& rng)
{
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    return {std::acos(z), phi};
}

}  // namespace

double density_eval(const TargetDensity& target, const SphereDirection& x)
{
    if (std::holds_alternative<UniformDensity>(target)) return 1.0 / kFourPi;
    const auto& b = std::get<GaussianBump>(target);
    const Vec3 u = x.unit_vector(), c = b.center.unit_vector();
    const double d2 = (u[0] - c[0]) * (u[0] - c[0]) + (u[1] - c[1]) * (u[1] - c[1]) +
                      (u[2] - c[2]) * (u[2] - c[2]);
    return b.amplitude * std::exp(-b.scale * d2);
}

double sup_norm(const TargetDensity& target)
{
    if (std::holds_alternative<UniformDensity>(target)) return 1.0 / kFourPi;
    return std::get<GaussianBump>(target).amplitude;
}

DensitySample sample_density(const TargetDensity& target, std::size_t n, Rng& rng)
{
    if (n < 1) throw DomainError("sample_density: need n >= 1");
    DensitySample out;
    out.points.reserve(n);
    if (std::holds_alternative<UniformDensity>(target)) {
        for (std::size_t k = 0; k < n; ++k) out.points.push_back(uniform_direction(rng));
        return out;
    }
    const double envelope = sup_norm(target);
    std::size_t proposed = 0;
    while (out.points.size() < n) {
        const SphereDirection x = uniform_direction(rng);
        ++proposed;
        if (rng.uniform() * envelope < density_eval(target, x)) out.points.push_back(x);
    }
    out.acceptance_rate = static_cast<double>(n) / static_cast<double>(proposed);
    return out;
}

NoisyObservations apply_noise(std::span<const SphereDirection> x, const NoiseModel& model, Rng& rng)
{
    NoisyObservations out;
    out.points.reserve(x.size());
    out.rotations.reserve(x.size());
    for (const auto& p : x) {
        const EulerRotation g = sample_rotation(model, rng);
        out.rotations.push_back(g);
        out.points.push_back(g.apply(p));
    }
    return out;
}

SphereDirection peak_locate(std::span<const double> values, const CubatureSet& grid)
{
    if (grid.size() == 0 || values.size() != grid.size())
        throw PreconditionError("peak_locate: need one value per grid point on a nonempty grid");
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k)
        if (values[k] > values[best]) best = k;
    return grid.point(best);
}

SphereDirection peak_locate(const Evaluator& f, const CubatureSet& grid)
{
    std::vector<double> values(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) values[k] = f(grid.point(k));
    return peak_locate(values, grid);
}

double lp_error(const Evaluator& f, const Evaluator& g, double p, const CubatureSet& grid)
{
    if (!(p >= 1.0)) throw DomainError("lp_error: need p >= 1");
    if (std::isinf(p)) {
        double worst = 0.0;
        for (const auto& x : grid.points()) worst = std::max(worst, std::abs(f(x) - g(x)));
        return worst;
    }
    const double acc = grid.integrate([&](const SphereDirection& x) { return std::pow(std::abs(f(x) - g(x)), p); });
    return std::pow(acc, 1.0 / p);
}

double lp_error(const Evaluator& f, const TargetDensity& target, double p, const CubatureSet& grid)
{
    return lp_error(f, [&](const SphereDirection& x) { return density_eval(target, x); }, p, grid);
}

void write_samples_csv(std::span<const SphereDirection> points, std::ostream& os)
{
    os << "theta,phi\n" << std::setprecision(17);
    for (const auto& p : points) os << p.theta << ',' << p.phi << '\n';
}

}  // namespace sphdeconv
