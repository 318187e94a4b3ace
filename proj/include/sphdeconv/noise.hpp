#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "sphdeconv/geometry.hpp"
#include "sphdeconv/harmonics.hpp"
#include "sphdeconv/rng.hpp"

namespace sphdeconv {

/// Rotation about Oz by phi ~ U[0, a]. a = 0 is the noiseless case.
struct ZAxisUniform {
    double a = 0.0;
};

/// Spectrum (1 + rho^2 l(l+1))^{-1} delta_{mn}.
struct RotationalLaplace {
    double rho2 = 1.0;
};

/// Spectrum (sin((l+1/2) theta) / ((2l+1) sin(theta/2)))^p delta_{mn}.
struct Rosenthal {
    double theta = kPi;
    double p = 1.0;
};

/// Unknown noise, known only through draws eps_1..eps_N.
struct EmpiricalNoise {
    std::vector<EulerRotation> rotations;
};

using NoiseModel = std::variant<ZAxisUniform, RotationalLaplace, Rosenthal, EmpiricalNoise>;

/// Short human-readable tag, e.g. "zaxis(a=0.39269908169872414)".
std::string describe(const NoiseModel& model);

/// Per-degree (2l+1)x(2l+1) matrices of a density on SO(3), indexed (m+l, n+l).
class RotationalSpectrum {
public:
    RotationalSpectrum() = default;
    explicit RotationalSpectrum(std::vector<Eigen::MatrixXcd> blocks);

    int max_degree() const noexcept { return static_cast<int>(blocks_.size()) - 1; }
    const Eigen::MatrixXcd& block(int l) const;
    cplx operator()(int l, int m, int n) const { return block(l)(m + l, n + l); }

private:
    std::vector<Eigen::MatrixXcd> blocks_;
};

/// Analytic spectra for the closed-form models; for EmpiricalNoise (1/N) Sum_j D^l(eps_j).
RotationalSpectrum noise_spectrum(const NoiseModel& model, int max_degree);

/// g_m(a) = (1 - e^{-i m a}) / (i m a), g_0 = 1: the z-axis uniform diagonal.
cplx zaxis_uniform_factor(int m, double a);

inline constexpr double kDefaultConditionLimit = 1e6;

/// 2-norm condition number of block(l) (infinite when singular).
double block_condition(const RotationalSpectrum& spec, int l);

/// (f^l_eps)^{-1}. Diagonal blocks are inverted entrywise.
/// Throws IllConditionedDegree when the condition number exceeds cond_limit.
Eigen::MatrixXcd inverse_block(const RotationalSpectrum& spec, int l,
                               double cond_limit = kDefaultConditionLimit);

/// Inverse blocks for every degree, with ill-conditioned degrees excluded (their block is
/// left empty) and listed instead of aborting.
class InverseSpectrum {
public:
    InverseSpectrum() = default;
    InverseSpectrum(std::vector<Eigen::MatrixXcd> blocks, std::vector<int> excluded);

    int max_degree() const noexcept { return static_cast<int>(blocks_.size()) - 1; }
    bool excluded(int l) const;
    const std::vector<int>& excluded_degrees() const noexcept { return excluded_; }
    /// Throws DomainError naming l when l exceeds max_degree().
    const Eigen::MatrixXcd& block(int l) const;

private:
    std::vector<Eigen::MatrixXcd> blocks_;
    std::vector<int> excluded_;
};

InverseSpectrum invert(const RotationalSpectrum& spec, double cond_limit = kDefaultConditionLimit);

/// Largest singular value of block(l).
double op_norm(const RotationalSpectrum& spec, int l);

struct DipEstimate {
    double nu = 0.0;            ///< least-squares slope of log||(f^l)^{-1}||_op against log l
    double fit_residual = 0.0;  ///< RMS residual of that fit
};

/// Degree of ill-posedness over l_lo..l_hi (at least three degrees, all invertible).
DipEstimate dip_estimate(const RotationalSpectrum& spec, int l_lo, int l_hi);

/// Draw one rotation. Only ZAxisUniform is generative: (phi ~ U[0,a), 0, 0).
EulerRotation sample_rotation(const NoiseModel& model, Rng& rng);

/// {"max_degree": L, "blocks": [[[[re, im], ...row...], ...], ...]} with row-major blocks.
nlohmann::json to_json(const RotationalSpectrum& spec);

}  // namespace sphdeconv
