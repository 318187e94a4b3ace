#include "sphdeconv/cubature.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "sphdeconv/error.hpp"

namespace sphdeconv {

CubatureSet::CubatureSet(CubatureScheme scheme, int level_or_degree,
                         std::vector<SphereDirection> points, std::vector<double> weights)
    : scheme_(scheme), level_or_degree_(level_or_degree), points_(std::move(points)),
      weights_(std::move(weights))
{
    if (points_.size() != weights_.size())
        throw PreconditionError("CubatureSet: points and weights differ in length");
}

int CubatureSet::exact_degree() const noexcept
{
    if (scheme_ == CubatureScheme::GaussProduct) return 2 * level_or_degree_ + 1;
    return 2 * (1 << level_or_degree_);
}

CubatureSet equal_area_points(int level)
{
    if (level < 0 || level > 13) throw DomainError("equal_area_points: level must be in [0, 13]");
    const long nside = 1L << level;
    const long npix = 12 * nside * nside;
    const double ns = static_cast<double>(nside);
    std::vector<SphereDirection> pts;
    pts.reserve(static_cast<std::size_t>(npix));

    auto polar_ring = [&](long i, bool north) {
        const double z = 1.0 - static_cast<double>(i * i) / (3.0 * ns * ns);
        const double theta = north ? std::acos(z) : kPi - std::acos(z);
        for (long k = 1; k <= 4 * i; ++k)
            pts.push_back({theta, (static_cast<double>(k) - 0.5) * kPi / (2.0 * i)});
    };

    for (long i = 1; i < nside; ++i) polar_ring(i, true);
    for (long i = nside; i <= 3 * nside; ++i) {
        const double z = 4.0 / 3.0 - 2.0 * static_cast<double>(i) / (3.0 * ns);
        const double shift = ((i - nside + 1) % 2) ? 0.5 : 0.0;
        const double theta = std::acos(z);
        for (long k = 1; k <= 4 * nside; ++k)
            pts.push_back({theta, (static_cast<double>(k) - shift) * kPi / (2.0 * ns)});
    }
    for (long i = nside - 1; i >= 1; --i) polar_ring(i, false);

    std::vector<double> w(pts.size(), kFourPi / static_cast<double>(npix));
    return CubatureSet(CubatureScheme::EqualArea, level, std::move(pts), std::move(w));
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n)
{
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");
    // P_n(z) and P_n'(z) by the three-term recurrence
    auto eval = [n](double z) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double pn = (n == 1) ? z : p1;
        const double pn1 = (n == 1) ? 1.0 : p0;
        return std::pair{pn, n * (pn1 - z * pn) / (1.0 - z * z)};
    };
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = eval(z);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double dp = eval(z).second;
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
    return {x, w};
}

CubatureSet gauss_product_grid(int max_degree)
{
    if (max_degree < 0) throw DomainError("gauss_product_grid: negative degree");
    const int n_theta = max_degree + 1;
    const int n_phi = 2 * max_degree + 2;
    const auto [nodes, gw] = gauss_legendre(n_theta);
    std::vector<SphereDirection> pts;
    std::vector<double> w;
    pts.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    w.reserve(pts.capacity());
    const double dphi = 2.0 * kPi / n_phi;
    // nodes ascend in cos(theta): walk them in reverse so colatitude increases
    for (int i = n_theta - 1; i >= 0; --i) {
        const double theta = std::acos(nodes[i]);
        for (int k = 0; k < n_phi; ++k) {
            pts.push_back({theta, k * dphi});
            w.push_back(gw[i] * dphi);
        }
    }
    return CubatureSet(CubatureScheme::GaussProduct, max_degree, std::move(pts), std::move(w));
}

void write_csv(const CubatureSet& set, std::ostream& os)
{
    os << "theta,phi,weight\n" << std::setprecision(17);
    for (std::size_t k = 0; k < set.size(); ++k)
        os << set.point(k).theta << ',' << set.point(k).phi << ',' << set.weight(k) << '\n';
}

}  // namespace sphdeconv
