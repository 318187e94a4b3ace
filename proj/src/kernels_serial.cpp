#include "sphdeconv/kernels.hpp"

namespace sphdeconv::kernels::serial {

std::vector<cplx> harmonic_moments(std::span<const SphereDirection> points,
                                   std::span<const double> weights, int max_degree)
{
    const std::size_t dim = SphericalSpectrum::size_for(max_degree);
    std::vector<cplx> acc(dim, cplx{0.0, 0.0});
    std::vector<cplx> y(dim);
    for (std::size_t k = 0; k < points.size(); ++k) {
        sph_harm_all(max_degree, points[k], y);
        const double w = weights.empty() ? 1.0 : weights[k];
        for (std::size_t i = 0; i < dim; ++i) acc[i] += w * std::conj(y[i]);
    }
    return acc;
}

std::vector<double> synthesize(const SphericalSpectrum& spectrum, int max_degree,
                               std::span<const SphereDirection> points)
{
    const std::size_t dim = SphericalSpectrum::size_for(max_degree);
    const auto coeffs = spectrum.data();
    std::vector<double> out(points.size());
    std::vector<cplx> y(dim);
    for (std::size_t k = 0; k < points.size(); ++k) {
        sph_harm_all(max_degree, points[k], y);
        double acc = 0.0;
        for (std::size_t i = 0; i < dim; ++i) acc += (coeffs[i] * y[i]).real();
        out[k] = acc;
    }
    return out;
}

std::vector<cplx> project_atoms(const SphericalSpectrum& spectrum, std::span<const double> band,
                                std::span<const SphereDirection> centers,
                                std::span<const double> scale)
{
    const int L = static_cast<int>(band.size()) - 1;
    std::vector<cplx> y(SphericalSpectrum::size_for(L));
    std::vector<cplx> out(centers.size());
    for (std::size_t k = 0; k < centers.size(); ++k) {
        sph_harm_all(L, centers[k], y);
        cplx acc{0.0, 0.0};
        for (int l = 0; l <= L; ++l) {
            if (band[l] == 0.0) continue;
            cplx row{0.0, 0.0};
            for (int m = -l; m <= l; ++m)
                row += spectrum(l, m) * y[SphericalSpectrum::index(l, m)];
            acc += band[l] * row;
        }
        out[k] = scale[k] * acc;
    }
    return out;
}

std::vector<Eigen::MatrixXcd> rotation_moments(std::span<const EulerRotation> rotations,
                                               int max_degree)
{
    std::vector<Eigen::MatrixXcd> acc;
    for (int l = 0; l <= max_degree; ++l)
        acc.push_back(Eigen::MatrixXcd::Zero(2 * l + 1, 2 * l + 1));
    for (const auto& g : rotations)
        for (int l = 0; l <= max_degree; ++l) acc[l] += wigner_D_matrix(l, g);
    return acc;
}

}  // namespace sphdeconv::kernels::serial
