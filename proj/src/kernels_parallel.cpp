#include "sphdeconv/kernels.hpp"

#include <algorithm>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace sphdeconv::kernels {

int max_threads()
{
#if defined(_OPENMP)
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n)
{
#if defined(_OPENMP)
    omp_set_num_threads(std::max(1, n));
#else
    (void)n;
#endif
}

namespace {

// Combine per-block partials in a fixed binary-tree order; partial[0] holds the total.
template <class T>
void pairwise_combine(std::vector<T>& partial)
{
    const std::size_t n = partial.size();
    for (std::size_t stride = 1; stride < n; stride *= 2)
        for (std::size_t i = 0; i + stride < n; i += 2 * stride) {
            auto& dst = partial[i];
            const auto& src = partial[i + stride];
            for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
        }
}

std::size_t block_count(std::size_t n) { return std::max<std::size_t>(1, (n + kBlockSize - 1) / kBlockSize); }

}  // namespace

namespace parallel {

std::vector<cplx> harmonic_moments(std::span<const SphereDirection> points,
                                   std::span<const double> weights, int max_degree)
{
    const std::size_t dim = SphericalSpectrum::size_for(max_degree);
    const std::size_t nblocks = block_count(points.size());
    std::vector<std::vector<cplx>> partial(nblocks, std::vector<cplx>(dim, cplx{0.0, 0.0}));

#pragma omp parallel
    {
        std::vector<cplx> y(dim);
#pragma omp for schedule(static)
        for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
            auto& acc = partial[b];
            const std::size_t lo = b * kBlockSize;
            const std::size_t hi = std::min(points.size(), lo + kBlockSize);
            for (std::size_t k = lo; k < hi; ++k) {
                sph_harm_all(max_degree, points[k], y);
                const double w = weights.empty() ? 1.0 : weights[k];
                for (std::size_t i = 0; i < dim; ++i) acc[i] += w * std::conj(y[i]);
            }
        }
    }
    pairwise_combine(partial);
    return std::move(partial[0]);
}

std::vector<double> synthesize(const SphericalSpectrum& spectrum, int max_degree,
                               std::span<const SphereDirection> points)
{
    const std::size_t dim = SphericalSpectrum::size_for(max_degree);
    const auto coeffs = spectrum.data();
    std::vector<double> out(points.size());
#pragma omp parallel
    {
        std::vector<cplx> y(dim);
#pragma omp for schedule(static)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(points.size()); ++k) {
            sph_harm_all(max_degree, points[k], y);
            double acc = 0.0;
            for (std::size_t i = 0; i < dim; ++i) acc += (coeffs[i] * y[i]).real();
            out[k] = acc;
        }
    }
    return out;
}

std::vector<cplx> project_atoms(const SphericalSpectrum& spectrum, std::span<const double> band,
                                std::span<const SphereDirection> centers,
                                std::span<const double> scale)
{
    const int L = static_cast<int>(band.size()) - 1;
    int lo = 0;
    while (lo <= L && band[lo] == 0.0) ++lo;
    std::vector<cplx> out(centers.size());
#pragma omp parallel
    {
        std::vector<cplx> y(SphericalSpectrum::size_for(L));
#pragma omp for schedule(static)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(centers.size()); ++k) {
            sph_harm_all(L, centers[k], y);
            cplx acc{0.0, 0.0};
            for (int l = lo; l <= L; ++l) {
                if (band[l] == 0.0) continue;
                const cplx* c = &spectrum.data()[SphericalSpectrum::index(l, -l)];
                const cplx* yy = &y[SphericalSpectrum::index(l, -l)];
                cplx row{0.0, 0.0};
                for (int i = 0; i < 2 * l + 1; ++i) row += c[i] * yy[i];
                acc += band[l] * row;
            }
            out[k] = scale[k] * acc;
        }
    }
    return out;
}

std::vector<Eigen::MatrixXcd> rotation_moments(std::span<const EulerRotation> rotations,
                                               int max_degree)
{
    const std::size_t nblocks = block_count(rotations.size());
    std::vector<std::vector<Eigen::MatrixXcd>> partial(nblocks);
    for (auto& p : partial)
        for (int l = 0; l <= max_degree; ++l)
            p.push_back(Eigen::MatrixXcd::Zero(2 * l + 1, 2 * l + 1));

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        const std::size_t lo = b * kBlockSize;
        const std::size_t hi = std::min(rotations.size(), lo + kBlockSize);
        for (std::size_t k = lo; k < hi; ++k) {
            const auto& g = rotations[k];
            for (int l = 0; l <= max_degree; ++l) {
                if (g.theta == 0.0) {
                    // D^l is diagonal for z-axis rotations
                    for (int m = -l; m <= l; ++m)
                        partial[b][l](m + l, m + l) += std::polar(1.0, -m * (g.phi + g.psi));
                } else {
                    partial[b][l] += wigner_D_matrix(l, g);
                }
            }
        }
    }
    pairwise_combine(partial);
    return std::move(partial[0]);
}

}  // namespace parallel

}  // namespace sphdeconv::kernels
