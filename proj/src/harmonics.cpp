#include "sphdeconv/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "sphdeconv/cubature.hpp"
#include "sphdeconv/error.hpp"
#include "sphdeconv/kernels.hpp"

namespace sphdeconv {

namespace {

void check_degree_order(int l, int m, const char* what)
{
    if (l < 0 || std::abs(m) > l)
        throw DomainError(std::string(what) + ": need |m| <= l, got l=" + std::to_string(l) +
                          " m=" + std::to_string(m));
}

// sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P^l_m(x), m >= 0, by the normalised recursion in l.
double normalized_legendre(int l, int m, double x, double s)
{
    double pmm = 1.0 / std::sqrt(kFourPi);
    for (int k = 1; k <= m; ++k) pmm *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
    if (l == m) return pmm;
    double p_prev = pmm;
    double p = std::sqrt(2.0 * m + 3.0) * x * pmm;
    for (int k = m + 2; k <= l; ++k) {
        const double kk = static_cast<double>(k) * k, mm = static_cast<double>(m) * m;
        const double a = std::sqrt((4.0 * kk - 1.0) / (kk - mm));
        const double b = std::sqrt(((k - 1.0) * (k - 1.0) - mm) / (4.0 * (k - 1.0) * (k - 1.0) - 1.0));
        const double next = a * (x * p - b * p_prev);
        p_prev = p;
        p = next;
    }
    return p;
}

// Closed form of d^l_{mn}(theta) at l = max(|m|, |n|), where the Wigner sum has a single term.
double wigner_d_seed(int l, int m, int n, double theta)
{
    const int s_lo = std::max(0, n - m);
    const int s_hi = std::min(l + n, l - m);
    const double c = std::cos(0.5 * theta), sn = std::sin(0.5 * theta);
    double acc = 0.0;
    for (int s = s_lo; s <= s_hi; ++s) {
        const double log_mag = 0.5 * (std::lgamma(l + m + 1.0) + std::lgamma(l - m + 1.0) +
                                      std::lgamma(l + n + 1.0) + std::lgamma(l - n + 1.0)) -
                               std::lgamma(l + n - s + 1.0) - std::lgamma(s + 1.0) -
                               std::lgamma(m - n + s + 1.0) - std::lgamma(l - m - s + 1.0);
        const int pc = 2 * l + n - m - 2 * s;
        const int ps = m - n + 2 * s;
        const double sign = ((m - n + s) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * std::exp(log_mag) * std::pow(c, pc) * std::pow(sn, ps);
    }
    return acc;
}

}  // namespace

SphericalSpectrum::SphericalSpectrum(int max_degree)
    : max_degree_(max_degree), coeffs_(size_for(max_degree), cplx{0.0, 0.0})
{
    if (max_degree < 0) throw DomainError("SphericalSpectrum: negative max degree");
}

cplx SphericalSpectrum::synthesize(const SphereDirection& x, int max_degree) const
{
    const int L = (max_degree < 0) ? max_degree_ : std::min(max_degree, max_degree_);
    std::vector<cplx> y(size_for(L));
    sph_harm_all(L, x, y);
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < y.size(); ++k) acc += coeffs_[k] * y[k];
    return acc;
}

double SphericalSpectrum::reality_defect() const
{
    double worst = 0.0;
    for (int l = 0; l <= max_degree_; ++l)
        for (int m = 1; m <= l; ++m) {
            const cplx expected = ((m % 2) ? -1.0 : 1.0) * std::conj((*this)(l, m));
            worst = std::max(worst, std::abs((*this)(l, -m) - expected));
        }
    return worst;
}

double assoc_legendre(int l, int m, double x)
{
    if (m < 0 || m > l) throw DomainError("assoc_legendre: need 0 <= m <= l");
    if (!(std::abs(x) <= 1.0)) throw DomainError("assoc_legendre: |x| must be <= 1");
    double pmm = 1.0;
    if (m > 0) {
        const double s = std::sqrt((1.0 - x) * (1.0 + x));
        double odd = 1.0;
        for (int k = 1; k <= m; ++k) {
            pmm *= odd * s;
            odd += 2.0;
        }
    }
    if (l == m) return pmm;
    double p_prev = pmm;
    double p = x * (2.0 * m + 1.0) * pmm;
    for (int k = m + 2; k <= l; ++k) {
        const double next = ((2.0 * k - 1.0) * x * p - (k + m - 1.0) * p_prev) / (k - m);
        p_prev = p;
        p = next;
    }
    return p;
}

double legendre(int l, double t)
{
    if (l < 0) throw DomainError("legendre: negative degree");
    if (!(std::abs(t) <= 1.0)) throw DomainError("legendre: |t| must be <= 1");
    if (l == 0) return 1.0;
    double p_prev = 1.0, p = t;
    for (int k = 2; k <= l; ++k) {
        const double next = ((2.0 * k - 1.0) * t * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = next;
    }
    return p;
}

double legendre_kernel(int l, double t) { return (2.0 * l + 1.0) / kFourPi * legendre(l, t); }

void legendre_kernel_all(int max_degree, double t, std::span<double> out)
{
    if (!(std::abs(t) <= 1.0)) throw DomainError("legendre_kernel_all: |t| must be <= 1");
    double p_prev = 1.0, p = t;
    out[0] = 1.0 / kFourPi;
    if (max_degree >= 1) out[1] = 3.0 / kFourPi * t;
    for (int k = 2; k <= max_degree; ++k) {
        const double next = ((2.0 * k - 1.0) * t * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = next;
        out[k] = (2.0 * k + 1.0) / kFourPi * p;
    }
}

cplx sph_harm(int l, int m, const SphereDirection& dir)
{
    check_degree_order(l, m, "sph_harm");
    const int am = std::abs(m);
    const double p = normalized_legendre(l, am, std::cos(dir.theta), std::sin(dir.theta));
    const cplx positive = ((am % 2) ? -p : p) * std::polar(1.0, am * dir.phi);
    if (m >= 0) return positive;
    return ((am % 2) ? -1.0 : 1.0) * std::conj(positive);
}

void sph_harm_all(int max_degree, const SphereDirection& dir, std::span<cplx> out)
{
    const double x = std::cos(dir.theta), s = std::sin(dir.theta);
    double pmm = 1.0 / std::sqrt(kFourPi);
    for (int m = 0; m <= max_degree; ++m) {
        if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
        const cplx e = std::polar(1.0, m * dir.phi);
        const double cs = (m % 2) ? -1.0 : 1.0;
        auto store = [&](int l, double p) {
            out[SphericalSpectrum::index(l, m)] = cs * p * e;
            if (m > 0) out[SphericalSpectrum::index(l, -m)] = p * std::conj(e);
        };
        store(m, pmm);
        if (m == max_degree) break;
        double p_prev = pmm;
        double p = std::sqrt(2.0 * m + 3.0) * x * pmm;
        store(m + 1, p);
        const double mm = static_cast<double>(m) * m;
        for (int l = m + 2; l <= max_degree; ++l) {
            const double ll = static_cast<double>(l) * l;
            const double a = std::sqrt((4.0 * ll - 1.0) / (ll - mm));
            const double b = std::sqrt(((l - 1.0) * (l - 1.0) - mm) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
            const double next = a * (x * p - b * p_prev);
            p_prev = p;
            p = next;
            store(l, p);
        }
    }
}

double wigner_d(int l, int m, int n, double theta)
{
    check_degree_order(l, m, "wigner_d");
    check_degree_order(l, n, "wigner_d");
    if (theta == 0.0) return (m == n) ? 1.0 : 0.0;
    const int l0 = std::max(std::abs(m), std::abs(n));
    const double x = std::cos(theta);
    if (l0 == 0) return legendre(l, x);
    double d_prev = 0.0;
    double d = wigner_d_seed(l0, m, n, theta);
    const double mn = static_cast<double>(m) * n;
    const double m2 = static_cast<double>(m) * m, n2 = static_cast<double>(n) * n;
    for (int k = l0; k < l; ++k) {
        const double kk = static_cast<double>(k);
        const double up = kk * std::sqrt(((kk + 1) * (kk + 1) - m2) * ((kk + 1) * (kk + 1) - n2));
        const double down = (kk + 1) * std::sqrt((kk * kk - m2) * (kk * kk - n2));
        const double next = ((2 * kk + 1) * (kk * (kk + 1) * x - mn) * d - down * d_prev) / up;
        d_prev = d;
        d = next;
    }
    return d;
}

Eigen::MatrixXd wigner_d_matrix(int l, double theta)
{
    if (l < 0) throw DomainError("wigner_d_matrix: negative degree");
    const int dim = 2 * l + 1;
    if (theta == 0.0) return Eigen::MatrixXd::Identity(dim, dim);
    Eigen::MatrixXd out(dim, dim);
    for (int m = -l; m <= l; ++m)
        for (int n = -l; n <= l; ++n) out(m + l, n + l) = wigner_d(l, m, n, theta);
    return out;
}

cplx wigner_D(int l, int m, int n, const EulerRotation& g)
{
    const double d = wigner_d(l, m, n, g.theta);
    return d * std::polar(1.0, -(m * g.phi + n * g.psi));
}

Eigen::MatrixXcd wigner_D_matrix(int l, const EulerRotation& g)
{
    const Eigen::MatrixXd d = wigner_d_matrix(l, g.theta);
    const int dim = 2 * l + 1;
    Eigen::MatrixXcd out(dim, dim);
    for (int m = -l; m <= l; ++m)
        for (int n = -l; n <= l; ++n)
            out(m + l, n + l) = d(m + l, n + l) * std::polar(1.0, -(m * g.phi + n * g.psi));
    return out;
}

SphericalSpectrum spherical_transform(const CubatureSet& grid, std::span<const double> samples,
                                      int max_degree)
{
    if (max_degree < 0) throw DomainError("spherical_transform: negative max degree");
    if (samples.size() != grid.size())
        throw PreconditionError("spherical_transform: one sample per grid point required");
    if (grid.exact_degree() < 2 * max_degree)
        throw PreconditionError("spherical_transform: grid exact to degree " +
                                std::to_string(grid.exact_degree()) + " cannot resolve L=" +
                                std::to_string(max_degree));
    std::vector<double> w(grid.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = grid.weight(k) * samples[k];
    const auto moments = kernels::parallel::harmonic_moments(grid.points(), w, max_degree);
    SphericalSpectrum out(max_degree);
    std::copy(moments.begin(), moments.end(), out.data().begin());
    return out;
}

}  // namespace sphdeconv
