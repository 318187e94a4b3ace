#pragma once

// Hot loops of the estimator, each in two flavours:
//   serial::   straightforward reference loops, kept for testing and benchmarking;
//   parallel:: OpenMP versions. Reductions over points use a fixed block partition
//              combined pairwise, so results do not depend on the thread count.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sphdeconv/geometry.hpp"
#include "sphdeconv/harmonics.hpp"

namespace sphdeconv::kernels {

/// Points per reduction block in the parallel kernels.
inline constexpr std::size_t kBlockSize = 256;

int max_threads();
void set_threads(int n);

namespace serial {

/// Sum_k w_k conj(Y^l_m(x_k)) for l <= max_degree in SphericalSpectrum::index order.
/// Empty `weights` means unit weights.
std::vector<cplx> harmonic_moments(std::span<const SphereDirection> points,
                                   std::span<const double> weights, int max_degree);

/// Re Sum_{l <= max_degree} Sum_m f^l_m Y^l_m(x) at every point.
std::vector<double> synthesize(const SphericalSpectrum& spectrum, int max_degree,
                               std::span<const SphereDirection> points);

/// beta_k = scale_k Sum_l band[l] Sum_m f^l_m Y^l_m(center_k); band has one entry per degree.
std::vector<cplx> project_atoms(const SphericalSpectrum& spectrum, std::span<const double> band,
                                std::span<const SphereDirection> centers,
                                std::span<const double> scale);

/// Per-degree sums Sum_k D^l(g_k), l <= max_degree.
std::vector<Eigen::MatrixXcd> rotation_moments(std::span<const EulerRotation> rotations,
                                               int max_degree);

}  // namespace serial

namespace parallel {

std::vector<cplx> harmonic_moments(std::span<const SphereDirection> points,
                                   std::span<const double> weights, int max_degree);

std::vector<double> synthesize(const SphericalSpectrum& spectrum, int max_degree,
                               std::span<const SphereDirection> points);

std::vector<cplx> project_atoms(const SphericalSpectrum& spectrum, std::span<const double> band,
                                std::span<const SphereDirection> centers,
                                std::span<const double> scale);

std::vector<Eigen::MatrixXcd> rotation_moments(std::span<const EulerRotation> rotations,
                                               int max_degree);

}  // namespace parallel

}  // namespace sphdeconv::kernels
