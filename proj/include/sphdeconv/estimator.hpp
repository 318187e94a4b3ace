#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

#include "sphdeconv/harmonics.hpp"
#include "sphdeconv/needlet.hpp"
#include "sphdeconv/noise.hpp"

namespace sphdeconv {

/// Natural-log rate t_N = sqrt(ln N / N).
double threshold_rate(std::size_t n);

/// min(floor(1/2 log2(N / ln N)), largest j with 12 * 4^j <= N).
int select_J(std::size_t n);

struct EstimatorConfig {
    std::size_t n = 0;   ///< sample count
    int J = 0;           ///< max level
    double kappa = 0.0;  ///< threshold multiplier applied to t_N sigma
    double M = 1.0;      ///< sup-norm bound on the target density
    double t_n = 0.0;

    /// Validates N >= 2, 0 <= J <= select_J(N), kappa >= 0, M > 0, and fills t_n.
    static EstimatorConfig make(std::size_t n, int J, double kappa, double M);
};

/// f^{l,N}_m = (1/N) Sum_j Sum_n [(f^l_eps)^{-1}]_{mn} conj(Y^l_n(Z_j)) for l <= max_degree.
/// Degrees excluded from `inverse` come out as zero.
SphericalSpectrum svd_coeffs(std::span<const SphereDirection> observations,
                             const InverseSpectrum& inverse, int max_degree);

/// Empirical moments (1/N) Sum_j conj(Y^l_n(Z_j)) before inversion.
SphericalSpectrum empirical_spectrum(std::span<const SphereDirection> observations, int max_degree);

/// Applies the per-degree inverse blocks to an empirical spectrum.
SphericalSpectrum deconvolve(const SphericalSpectrum& empirical, const InverseSpectrum& inverse);

/// beta-hat_{j eta} = Sum_{lm} f^{l,N}_m conj(psi^{lm}_{j eta}), via svd_coeffs and the parallel
/// atom projection.
NeedletCoefficients needlet_coeff_estimates(const NeedletFrame& frame,
                                            std::span<const SphereDirection> observations,
                                            const InverseSpectrum& inverse,
                                            double* max_imag = nullptr);

/// Same estimate summed in the order of the simulation-section display:
/// (1/N) sqrt(lambda) Sum_l b Sum_m Y^l_m(xi) Sum_n inv_{mn} Sum_u conj(Y^l_n(Z_u)).
/// Serial reference implementation.
NeedletCoefficients needlet_coeff_estimates_direct(const NeedletFrame& frame,
                                                   std::span<const SphereDirection> observations,
                                                   const InverseSpectrum& inverse);

/// sigma_{j eta} = M sqrt( Sum_{l in band(j)} Sum_n | Sum_m conj(psi^{lm}) inv_{mn} |^2 ).
double sigma(const NeedletFrame& frame, int j, std::size_t eta, const InverseSpectrum& inverse, double M);

/// sigma for every atom of the frame.
NeedletCoefficients sigma_all(const NeedletFrame& frame, const InverseSpectrum& inverse, double M);

struct SurvivingCoefficient {
    int j = 0;
    std::size_t eta = 0;
    double beta = 0.0;
};

struct ThresholdedExpansion {
    double constant_term = 1.0 / kFourPi;
    std::vector<SurvivingCoefficient> surviving;
    EstimatorConfig config;
};

/// Keeps beta-hat with |beta-hat| >= kappa t_N sigma; the constant term is 1/(4 pi).
ThresholdedExpansion threshold(const NeedletCoefficients& beta, const NeedletCoefficients& sigmas,
                               const EstimatorConfig& config);

ThresholdedExpansion threshold(const NeedletCoefficients& beta, const NeedletFrame& frame,
                               const InverseSpectrum& inverse, const EstimatorConfig& config);

NeedletSeries reconstruct(const ThresholdedExpansion& expansion, const NeedletFrame& frame);

/// Survivor counts for levels 0..J.
std::vector<int> survival_counts(const ThresholdedExpansion& expansion);

/// Truncated harmonic series Re Sum_{l <= L} f^l_m Y^l_m.
class HarmonicSeries {
public:
    HarmonicSeries(SphericalSpectrum spectrum, int max_degree);

    double operator()(const SphereDirection& x) const;
    /// Complex value before the real part is taken.
    cplx complex_value(const SphereDirection& x) const;
    std::vector<double> evaluate(std::span<const SphereDirection> points) const;

private:
    SphericalSpectrum spectrum_;
    int max_degree_;
};

HarmonicSeries svd_density_estimate(const SphericalSpectrum& spectrum, int truncation);

/// {config, constant, terms: [{j, eta, theta, phi, beta}]}.
nlohmann::json to_json(const ThresholdedExpansion& expansion, const NeedletFrame& frame);

}  // namespace sphdeconv
