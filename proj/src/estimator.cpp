#include "sphdeconv/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphdeconv/error.hpp"
#include "sphdeconv/kernels.hpp"

namespace sphdeconv {

namespace {

int unclamped_J(std::size_t n)
{
    const double nn = static_cast<double>(n);
    const double v = 0.5 * std::log2(nn / std::log(nn));
    return std::max(0, static_cast<int>(std::floor(v)));
}

void check_observations(std::span<const SphereDirection> observations)
{
    if (observations.empty()) throw PreconditionError("estimator: empty observation sample");
}

}  // namespace

double threshold_rate(std::size_t n)
{
    const double nn = static_cast<double>(n);
    return std::sqrt(std::log(nn) / nn);
}

int select_J(std::size_t n)
{
    if (n < 2) throw DomainError("select_J: need N >= 2");
    int cap = 0;
    while (12.0 * std::ldexp(1.0, 2 * (cap + 1)) <= static_cast<double>(n)) ++cap;
    return std::min(unclamped_J(n), cap);
}

EstimatorConfig EstimatorConfig::make(std::size_t n, int J, double kappa, double M)
{
    if (n < 2) throw DomainError("EstimatorConfig: need N >= 2");
    if (J < 0 || J > unclamped_J(n))
        throw DomainError("EstimatorConfig: J = " + std::to_string(J) + " exceeds J_max(N) = " +
                          std::to_string(unclamped_J(n)));
    if (!(kappa >= 0.0)) throw DomainError("EstimatorConfig: kappa must be nonnegative");
    if (!(M > 0.0)) throw DomainError("EstimatorConfig: M must be positive");
    return {n, J, kappa, M, threshold_rate(n)};
}

SphericalSpectrum empirical_spectrum(std::span<const SphereDirection> observations, int max_degree)
{
    check_observations(observations);
    const auto sums = kernels::parallel::harmonic_moments(observations, {}, max_degree);
    SphericalSpectrum out(max_degree);
    const double inv_n = 1.0 / static_cast<double>(observations.size());
    for (std::size_t k = 0; k < sums.size(); ++k) out.data()[k] = sums[k] * inv_n;
    return out;
}

SphericalSpectrum deconvolve(const SphericalSpectrum& empirical, const InverseSpectrum& inverse)
{
    const int L = empirical.max_degree();
    if (inverse.max_degree() < L)
        throw DomainError("deconvolve: inverse noise block missing at degree " +
                          std::to_string(inverse.max_degree() + 1));
    SphericalSpectrum out(L);
    for (int l = 0; l <= L; ++l) {
        if (inverse.excluded(l)) continue;
        const auto& inv = inverse.block(l);
        for (int m = -l; m <= l; ++m) {
            cplx acc{0.0, 0.0};
            for (int n = -l; n <= l; ++n) acc += inv(m + l, n + l) * empirical(l, n);
            out(l, m) = acc;
        }
    }
    return out;
}

SphericalSpectrum svd_coeffs(std::span<const SphereDirection> observations,
                             const InverseSpectrum& inverse, int max_degree)
{
    return deconvolve(empirical_spectrum(observations, max_degree), inverse);
}

NeedletCoefficients needlet_coeff_estimates(const NeedletFrame& frame,
                                            std::span<const SphereDirection> observations,
                                            const InverseSpectrum& inverse, double* max_imag)
{
    return frame_analysis(frame, svd_coeffs(observations, inverse, frame.max_degree()), max_imag);
}

NeedletCoefficients needlet_coeff_estimates_direct(const NeedletFrame& frame,
                                                   std::span<const SphereDirection> observations,
                                                   const InverseSpectrum& inverse)
{
    check_observations(observations);
    const int L = frame.max_degree();
    if (inverse.max_degree() < L)
        throw DomainError("needlet_coeff_estimates_direct: inverse noise block missing at degree " +
                          std::to_string(inverse.max_degree() + 1));
    const auto sums = kernels::serial::harmonic_moments(observations, {}, L);
    const double inv_n = 1.0 / static_cast<double>(observations.size());
    NeedletCoefficients beta(frame);
    std::vector<cplx> y(SphericalSpectrum::size_for(L));
    for (int j = 0; j <= frame.max_level(); ++j) {
        const auto& cub = frame.cubature(j);
        for (std::size_t eta = 0; eta < cub.size(); ++eta) {
            sph_harm_all(L, cub.point(eta), y);
            cplx acc{0.0, 0.0};
            for (int l = NeedletFrame::band_min(j); l <= NeedletFrame::band_max(j); ++l) {
                if (inverse.excluded(l)) continue;
                const auto& inv = inverse.block(l);
                cplx over_m{0.0, 0.0};
                for (int m = -l; m <= l; ++m) {
                    cplx over_n{0.0, 0.0};
                    for (int n = -l; n <= l; ++n)
                        over_n += inv(m + l, n + l) * sums[SphericalSpectrum::index(l, n)];
                    over_m += y[SphericalSpectrum::index(l, m)] * over_n;
                }
                acc += frame.band_weight(j, l) * over_m;
            }
            beta(j, eta) = (inv_n * std::sqrt(cub.weight(eta)) * acc).real();
        }
    }
    return beta;
}

namespace {

double sigma_at(const NeedletFrame& frame, int j, std::size_t eta, const InverseSpectrum& inverse,
                double M, std::vector<cplx>& y)
{
    const auto& cub = frame.cubature(j);
    const int hi = NeedletFrame::band_max(j);
    if (inverse.max_degree() < hi)
        throw DomainError("sigma: inverse noise block missing at degree " +
                          std::to_string(inverse.max_degree() + 1));
    sph_harm_all(hi, cub.point(eta), y);
    const double sw = std::sqrt(cub.weight(eta));
    double acc = 0.0;
    for (int l = NeedletFrame::band_min(j); l <= hi; ++l) {
        const double b = frame.band_weight(j, l);
        if (b == 0.0 || inverse.excluded(l)) continue;
        const auto& inv = inverse.block(l);
        const int dim = 2 * l + 1;
        // conj(psi^{lm}) = sqrt(lambda) b Y^l_m(center)
        Eigen::Map<const Eigen::RowVectorXcd> row(&y[SphericalSpectrum::index(l, -l)], dim);
        acc += (sw * b) * (sw * b) * (row * inv).squaredNorm();
    }
    return M * std::sqrt(acc);
}

}  // namespace

double sigma(const NeedletFrame& frame, int j, std::size_t eta, const InverseSpectrum& inverse, double M)
{
    frame.atom(j, eta);
    std::vector<cplx> y(SphericalSpectrum::size_for(NeedletFrame::band_max(j)));
    return sigma_at(frame, j, eta, inverse, M, y);
}

NeedletCoefficients sigma_all(const NeedletFrame& frame, const InverseSpectrum& inverse, double M)
{
    if (inverse.max_degree() < frame.max_degree())
        throw DomainError("sigma: inverse noise block missing at degree " +
                          std::to_string(inverse.max_degree() + 1));
    NeedletCoefficients out(frame);
    for (int j = 0; j <= frame.max_level(); ++j) {
        auto lv = out.level(j);
#pragma omp parallel
        {
            std::vector<cplx> y(SphericalSpectrum::size_for(frame.max_degree()));
#pragma omp for schedule(static)
            for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(lv.size()); ++k)
                lv[k] = sigma_at(frame, j, static_cast<std::size_t>(k), inverse, M, y);
        }
    }
    return out;
}

ThresholdedExpansion threshold(const NeedletCoefficients& beta, const NeedletCoefficients& sigmas,
                               const EstimatorConfig& config)
{
    if (beta.size() != sigmas.size() || beta.max_level() != sigmas.max_level())
        throw PreconditionError("threshold: coefficient and sigma layouts differ");
    if (config.J > beta.max_level())
        throw PreconditionError("threshold: config level exceeds the coefficient levels");
    ThresholdedExpansion out;
    out.config = config;
    const double scale = config.kappa * config.t_n;
    for (int j = 0; j <= config.J; ++j) {
        const auto b = beta.level(j);
        const auto s = sigmas.level(j);
        for (std::size_t k = 0; k < b.size(); ++k)
            if (std::abs(b[k]) >= scale * std::abs(s[k])) out.surviving.push_back({j, k, b[k]});
    }
    return out;
}

ThresholdedExpansion threshold(const NeedletCoefficients& beta, const NeedletFrame& frame,
                               const InverseSpectrum& inverse, const EstimatorConfig& config)
{
    return threshold(beta, sigma_all(frame, inverse, config.M), config);
}

NeedletSeries reconstruct(const ThresholdedExpansion& expansion, const NeedletFrame& frame)
{
    std::vector<NeedletTerm> terms;
    terms.reserve(expansion.surviving.size());
    for (const auto& s : expansion.surviving) terms.push_back({s.j, s.eta, s.beta});
    return NeedletSeries(frame, 1.0 / kFourPi, std::move(terms));
}

std::vector<int> survival_counts(const ThresholdedExpansion& expansion)
{
    std::vector<int> counts(static_cast<std::size_t>(expansion.config.J) + 1, 0);
    for (const auto& s : expansion.surviving) ++counts.at(static_cast<std::size_t>(s.j));
    return counts;
}

HarmonicSeries::HarmonicSeries(SphericalSpectrum spectrum, int max_degree)
    : spectrum_(std::move(spectrum)), max_degree_(max_degree)
{
    if (max_degree < 0 || max_degree > spectrum_.max_degree())
        throw PreconditionError("svd_density_estimate: truncation exceeds the spectrum degree");
}

cplx HarmonicSeries::complex_value(const SphereDirection& x) const
{
    return spectrum_.synthesize(x, max_degree_);
}

double HarmonicSeries::operator()(const SphereDirection& x) const { return complex_value(x).real(); }

std::vector<double> HarmonicSeries::evaluate(std::span<const SphereDirection> points) const
{
    return kernels::parallel::synthesize(spectrum_, max_degree_, points);
}

HarmonicSeries svd_density_estimate(const SphericalSpectrum& spectrum, int truncation)
{
    return HarmonicSeries(spectrum, truncation);
}

nlohmann::json to_json(const ThresholdedExpansion& expansion, const NeedletFrame& frame)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& s : expansion.surviving) {
        const auto c = frame.atom(s.j, s.eta).center;
        terms.push_back({{"j", s.j}, {"eta", s.eta}, {"theta", c.theta}, {"phi", c.phi}, {"beta", s.beta}});
    }
    const auto& cfg = expansion.config;
    return {{"config", {{"n", cfg.n}, {"J", cfg.J}, {"kappa", cfg.kappa}, {"M", cfg.M}, {"t_n", cfg.t_n}}},
            {"constant", expansion.constant_term},
            {"terms", std::move(terms)}};
}

}  // namespace sphdeconv
