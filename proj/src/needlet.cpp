#include "sphdeconv/needlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sphdeconv/error.hpp"
#include "sphdeconv/kernels.hpp"

namespace sphdeconv {

namespace {

double bump(double t)
{
    if (t <= 0.5 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / ((t - 0.5) * (1.0 - t)));
}

double bump_integral(double from)
{
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(bump, from, 1.0, 10, 1e-14);
}

}  // namespace

double bump_cutoff(double xi)
{
    xi = std::abs(xi);
    if (xi <= 0.5) return 1.0;
    if (xi >= 1.0) return 0.0;
    static const double total = bump_integral(0.5);
    return std::clamp(bump_integral(xi) / total, 0.0, 1.0);
}

WindowFunction::WindowFunction() : cutoff_(bump_cutoff) {}

WindowFunction::WindowFunction(Cutoff cutoff) : cutoff_(std::move(cutoff)) {}

double WindowFunction::cutoff(double xi) const { return cutoff_(xi); }

double WindowFunction::squared(double xi) const
{
    if (xi <= 0.5 || xi >= 2.0) return 0.0;
    return std::max(0.0, cutoff_(0.5 * xi) - cutoff_(xi));
}

double WindowFunction::operator()(double xi) const { return std::sqrt(squared(xi)); }

double window_eval(const WindowFunction& w, double xi)
{
    if (!(xi >= 0.0)) throw DomainError("window_eval: xi must be nonnegative");
    return w(xi);
}

NeedletFrame::NeedletFrame(int max_level, WindowFunction window, CubatureScheme scheme)
    : max_level_(max_level), window_(std::move(window)), scheme_(scheme)
{
    if (max_level < 0 || max_level > 10)
        throw DomainError("NeedletFrame: max level must lie in [0, 10]");
    const int L = max_degree();
    offsets_.push_back(0);
    for (int j = 0; j <= max_level; ++j) {
        cubature_.push_back(scheme == CubatureScheme::EqualArea
                                ? equal_area_points(j)
                                : gauss_product_grid((1 << (j + 1)) - 1));
        std::vector<double> b(static_cast<std::size_t>(L) + 1, 0.0);
        const double scale = std::ldexp(1.0, -j);
        for (int l = band_min(j); l <= band_max(j); ++l) b[l] = window_(l * scale);
        band_.push_back(std::move(b));
        std::vector<double> sw(cubature_.back().size());
        for (std::size_t k = 0; k < sw.size(); ++k) sw[k] = std::sqrt(cubature_.back().weight(k));
        sqrt_weights_.push_back(std::move(sw));
        offsets_.push_back(offsets_.back() + cubature_.back().size());
    }
}

std::size_t NeedletFrame::check(int j) const
{
    if (j < 0 || j > max_level_)
        throw DomainError("NeedletFrame: level " + std::to_string(j) + " out of range");
    return static_cast<std::size_t>(j);
}

double NeedletFrame::band_weight(int j, int l) const
{
    const auto b = band_weights(j);
    if (l < 0 || l >= static_cast<int>(b.size())) return 0.0;
    return b[l];
}

NeedletAtom NeedletFrame::atom(int j, std::size_t eta) const
{
    const auto& cub = cubature(j);
    if (eta >= cub.size())
        throw DomainError("NeedletFrame: atom index " + std::to_string(eta) + " out of range at level " +
                          std::to_string(j));
    return {j, eta, cub.point(eta), cub.weight(eta)};
}

NeedletCoefficients::NeedletCoefficients(const NeedletFrame& frame)
{
    for (int j = 0; j <= frame.max_level(); ++j) offsets_.push_back(frame.level_offset(j));
    offsets_.push_back(frame.total_atoms());
    values_.assign(frame.total_atoms(), 0.0);
}

double atom_eval(const NeedletFrame& frame, int j, std::size_t eta, const SphereDirection& x)
{
    const NeedletAtom a = frame.atom(j, eta);
    const double t = std::clamp(dot(x.unit_vector(), a.center.unit_vector()), -1.0, 1.0);
    const int hi = NeedletFrame::band_max(j);
    std::vector<double> kernel(static_cast<std::size_t>(hi) + 1);
    legendre_kernel_all(hi, t, kernel);
    double acc = 0.0;
    for (int l = NeedletFrame::band_min(j); l <= hi; ++l) acc += frame.band_weight(j, l) * kernel[l];
    return std::sqrt(a.weight) * acc;
}

std::map<std::pair<int, int>, cplx> atom_harmonic_coeffs(const NeedletFrame& frame, int j,
                                                          std::size_t eta)
{
    const NeedletAtom a = frame.atom(j, eta);
    const double sw = std::sqrt(a.weight);
    std::map<std::pair<int, int>, cplx> out;
    for (int l = NeedletFrame::band_min(j); l <= NeedletFrame::band_max(j); ++l) {
        const double b = frame.band_weight(j, l);
        if (b == 0.0) continue;
        for (int m = -l; m <= l; ++m) out[{l, m}] = sw * b * std::conj(sph_harm(l, m, a.center));
    }
    return out;
}

double atom_norm_sq(const NeedletFrame& frame, int j, std::size_t eta)
{
    const NeedletAtom a = frame.atom(j, eta);
    double acc = 0.0;
    for (int l = NeedletFrame::band_min(j); l <= NeedletFrame::band_max(j); ++l) {
        const double b = frame.band_weight(j, l);
        acc += b * b * (2.0 * l + 1.0) / kFourPi;
    }
    return a.weight * acc;
}

NeedletCoefficients frame_analysis(const NeedletFrame& frame, const SphericalSpectrum& spectrum,
                                   double* max_imag)
{
    if (spectrum.max_degree() < frame.max_degree())
        throw PreconditionError("frame_analysis: spectrum has degree " +
                                std::to_string(spectrum.max_degree()) + ", frame needs " +
                                std::to_string(frame.max_degree()));
    NeedletCoefficients beta(frame);
    double worst = 0.0;
    for (int j = 0; j <= frame.max_level(); ++j) {
        const auto vals = kernels::parallel::project_atoms(spectrum, frame.band_weights(j),
                                                           frame.cubature(j).points(),
                                                           frame.sqrt_weights(j));
        auto out = beta.level(j);
        for (std::size_t k = 0; k < vals.size(); ++k) {
            out[k] = vals[k].real();
            worst = std::max(worst, std::abs(vals[k].imag()));
        }
    }
    if (max_imag) *max_imag = worst;
    return beta;
}

NeedletSeries::NeedletSeries(const NeedletFrame& frame, double constant_term,
                             std::vector<NeedletTerm> terms)
    : constant_(constant_term), terms_(std::move(terms)), max_degree_(frame.max_degree()),
      spectrum_(frame.max_degree())
{
    for (int j = 0; j <= frame.max_level(); ++j)
        band_.emplace_back(frame.band_weights(j).begin(), frame.band_weights(j).end());
    spectrum_(0, 0) = constant_ * std::sqrt(kFourPi);
    std::vector<cplx> y(SphericalSpectrum::size_for(max_degree_));
    for (const auto& t : terms_) {
        const NeedletAtom a = frame.atom(t.j, t.eta);
        const double scale = std::sqrt(a.weight);
        atoms_.push_back({a.center.unit_vector(), scale, t.j, t.beta});
        sph_harm_all(max_degree_, a.center, y);
        for (int l = NeedletFrame::band_min(t.j); l <= NeedletFrame::band_max(t.j); ++l) {
            const double c = t.beta * scale * band_[t.j][l];
            if (c == 0.0) continue;
            for (int m = -l; m <= l; ++m)
                spectrum_(l, m) += c * std::conj(y[SphericalSpectrum::index(l, m)]);
        }
    }
}

double NeedletSeries::operator()(const SphereDirection& x) const
{
    const Vec3 v = x.unit_vector();
    std::vector<double> kernel(static_cast<std::size_t>(max_degree_) + 1);
    double acc = constant_;
    for (const auto& a : atoms_) {
        const double t = std::clamp(dot(v, a.center), -1.0, 1.0);
        const int hi = NeedletFrame::band_max(a.j);
        legendre_kernel_all(hi, t, kernel);
        double s = 0.0;
        for (int l = NeedletFrame::band_min(a.j); l <= hi; ++l) s += band_[a.j][l] * kernel[l];
        acc += a.beta * a.scale * s;
    }
    return acc;
}

std::vector<double> NeedletSeries::evaluate(std::span<const SphereDirection> points) const
{
    return kernels::parallel::synthesize(spectrum_, max_degree_, points);
}

NeedletSeries frame_synthesis(const NeedletFrame& frame, const NeedletCoefficients& beta,
                              double constant_term)
{
    if (beta.max_level() != frame.max_level() || beta.size() != frame.total_atoms())
        throw PreconditionError("frame_synthesis: coefficients do not match the frame");
    std::vector<NeedletTerm> terms;
    for (int j = 0; j <= frame.max_level(); ++j) {
        const auto lv = beta.level(j);
        for (std::size_t k = 0; k < lv.size(); ++k)
            if (lv[k] != 0.0) terms.push_back({j, k, lv[k]});
    }
    return NeedletSeries(frame, constant_term, std::move(terms));
}

double besov_seminorm(const NeedletCoefficients& beta, double s, double pi, double r)
{
    if (!(s > 0.0) || !(pi >= 1.0) || !(r >= 1.0))
        throw DomainError("besov_seminorm: need s > 0, pi >= 1, r >= 1");
    const bool pi_inf = std::isinf(pi), r_inf = std::isinf(r);
    double acc = 0.0;
    for (int j = 0; j <= beta.max_level(); ++j) {
        double level_norm = 0.0;
        for (double b : beta.level(j))
            level_norm = pi_inf ? std::max(level_norm, std::abs(b)) : level_norm + std::pow(std::abs(b), pi);
        if (!pi_inf) level_norm = std::pow(level_norm, 1.0 / pi);
        const double inv_pi = pi_inf ? 0.0 : 1.0 / pi;
        const double term = std::exp2(j * (s + 2.0 * (0.5 - inv_pi))) * level_norm;
        acc = r_inf ? std::max(acc, term) : acc + std::pow(term, r);
    }
    return r_inf ? acc : std::pow(acc, 1.0 / r);
}

}  // namespace sphdeconv
