#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sphdeconv/geometry.hpp"

namespace sphdeconv {

using cplx = std::complex<double>;

class CubatureSet;

/// Complex coefficients f^l_m for 0 <= l <= L, -l <= m <= l, stored degree-major.
class SphericalSpectrum {
public:
    SphericalSpectrum() = default;
    explicit SphericalSpectrum(int max_degree);

    int max_degree() const noexcept { return max_degree_; }
    static constexpr std::size_t index(int l, int m) noexcept
    {
        return static_cast<std::size_t>(l * l + l + m);
    }
    static constexpr std::size_t size_for(int max_degree) noexcept
    {
        return static_cast<std::size_t>((max_degree + 1) * (max_degree + 1));
    }

    cplx& operator()(int l, int m) { return coeffs_[index(l, m)]; }
    const cplx& operator()(int l, int m) const { return coeffs_[index(l, m)]; }

    std::span<cplx> data() noexcept { return coeffs_; }
    std::span<const cplx> data() const noexcept { return coeffs_; }

    /// Sum_{l <= max_degree} Sum_m f^l_m Y^l_m(x). A negative max_degree means all degrees.
    cplx synthesize(const SphereDirection& x, int max_degree = -1) const;

    /// Largest deviation from f(l,-m) = (-1)^m conj f(l,m).
    double reality_defect() const;

private:
    int max_degree_ = -1;
    std::vector<cplx> coeffs_;
};

/// P^l_m(x) without the Condon-Shortley phase, by upward recursion in l.
double assoc_legendre(int l, int m, double x);

/// Legendre polynomial P_l(t).
double legendre(int l, double t);

/// L_l(t) = (2l+1)/(4 pi) P_l(t), the reproducing kernel of the degree-l harmonics.
double legendre_kernel(int l, double t);

/// Fills out[l] = L_l(t) for l = 0..max_degree.
void legendre_kernel_all(int max_degree, double t, std::span<double> out);

/// Y^l_m(theta, phi) = (-1)^m sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P^l_m(cos theta) e^{i m phi},
/// negative orders through Y^l_{-m} = (-1)^m conj(Y^l_m). Orthonormal for the area measure.
cplx sph_harm(int l, int m, const SphereDirection& dir);

/// All Y^l_m(dir) for l <= max_degree in SphericalSpectrum::index order.
/// `out` must hold SphericalSpectrum::size_for(max_degree) entries.
void sph_harm_all(int max_degree, const SphereDirection& dir, std::span<cplx> out);

/// Wigner small-d function d^l_{mn}(theta), the generalized Legendre function P^l_{mn}(cos theta).
/// Fixed-(m,n) three-term recursion in l, started from the closed form at l = max(|m|,|n|).
double wigner_d(int l, int m, int n, double theta);

/// Full (2l+1)x(2l+1) block of d^l_{mn}(theta), indexed (m+l, n+l).
Eigen::MatrixXd wigner_d_matrix(int l, double theta);

/// D^l_{mn}(g) = e^{-i(m phi + n psi)} d^l_{mn}(theta), so that conj Y^l_m(g x) = Sum_n D^l_{mn}(g) conj Y^l_n(x).
cplx wigner_D(int l, int m, int n, const EulerRotation& g);

Eigen::MatrixXcd wigner_D_matrix(int l, const EulerRotation& g);

/// f^l_m = Sum_k w_k f(x_k) conj(Y^l_m(x_k)). Requires a grid exact to degree 2L.
SphericalSpectrum spherical_transform(const CubatureSet& grid, std::span<const double> samples,
                                      int max_degree);

}  // namespace sphdeconv
