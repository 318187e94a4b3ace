#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "sphdeconv/cubature.hpp"
#include "sphdeconv/geometry.hpp"
#include "sphdeconv/noise.hpp"
#include "sphdeconv/rng.hpp"

namespace sphdeconv {

using Evaluator = std::function<double(const SphereDirection&)>;

struct UniformDensity {};

/// amplitude * exp(-scale |w - center|^2), |.| the chordal distance in R^3.
struct GaussianBump {
    SphereDirection center{kPi / 2, kPi / 2};
    double scale = 4.0;
    double amplitude = 1.0 / 0.7854;

    /// Bump centred at (0, 1, 0) with scale 4 and amplitude 1/0.7854.
    static GaussianBump example2() { return {}; }
};

using TargetDensity = std::variant<UniformDensity, GaussianBump>;

/// Density with respect to the area measure (total mass 4 pi).
double density_eval(const TargetDensity& target, const SphereDirection& x);

/// sup_x f(x).
double sup_norm(const TargetDensity& target);

struct DensitySample {
    std::vector<SphereDirection> points;
    double acceptance_rate = 1.0;  ///< accepted / proposed (1 for direct sampling)
};

/// Uniform: z ~ U[-1, 1], phi ~ U[0, 2 pi). Bump: rejection from the uniform proposal with
/// envelope equal to the amplitude.
DensitySample sample_density(const TargetDensity& target, std::size_t n, Rng& rng);

struct NoisyObservations {
    std::vector<SphereDirection> points;     ///< Z_i = eps_i X_i
    std::vector<EulerRotation> rotations;    ///< eps_i, kept for empirical noise spectra
};

/// Draws eps_i i.i.d. from the model and rotates each X_i.
NoisyObservations apply_noise(std::span<const SphereDirection> x, const NoiseModel& model, Rng& rng);

/// Grid point maximising the evaluator; ties resolve to the lowest index.
SphereDirection peak_locate(const Evaluator& f, const CubatureSet& grid);
/// Same, from precomputed values at the grid points.
SphereDirection peak_locate(std::span<const double> values, const CubatureSet& grid);

/// (int |f - g|^p)^{1/p} by quadrature; p = +infinity gives the max over the grid.
double lp_error(const Evaluator& f, const Evaluator& g, double p, const CubatureSet& grid);
double lp_error(const Evaluator& f, const TargetDensity& target, double p, const CubatureSet& grid);

/// theta,phi rows with a header line, 17 significant digits.
void write_samples_csv(std::span<const SphereDirection> points, std::ostream& os);

}  // namespace sphdeconv
