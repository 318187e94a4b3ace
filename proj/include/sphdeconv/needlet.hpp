#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "sphdeconv/cubature.hpp"
#include "sphdeconv/harmonics.hpp"

namespace sphdeconv {

/// Littlewood-Paley window b(xi) = sqrt(phi(xi/2) - phi(xi)) built from a cutoff phi with
/// phi = 1 on [0, 1/2], phi = 0 on [1, inf), nonincreasing in between.
class WindowFunction {
public:
    using Cutoff = std::function<double(double)>;

    /// phi(xi) = int_xi^1 h / int_{1/2}^1 h on (1/2, 1), h(t) = exp(-1/((t-1/2)(1-t))).
    WindowFunction();
    explicit WindowFunction(Cutoff cutoff);

    double cutoff(double xi) const;
    double squared(double xi) const;
    double operator()(double xi) const;

private:
    Cutoff cutoff_;
};

/// b(xi); throws DomainError for negative xi.
double window_eval(const WindowFunction& w, double xi);

/// Smooth-bump cutoff used by the default window.
double bump_cutoff(double xi);

struct NeedletAtom {
    int j = 0;
    std::size_t eta = 0;
    SphereDirection center;
    double weight = 0.0;  ///< cubature weight lambda, steradians
};

/// Needlet frame for levels 0..J. Level j uses the band 2^{j-1} < l < 2^{j+1} and the
/// level-j cubature: equal-area pixel centres (12 * 4^j atoms) or, for exact
/// reconstruction, the Gauss product grid exact through degree 2^{j+2} - 1.
class NeedletFrame {
public:
    explicit NeedletFrame(int max_level, WindowFunction window = WindowFunction(),
                          CubatureScheme scheme = CubatureScheme::EqualArea);

    int max_level() const noexcept { return max_level_; }
    /// Highest degree any atom touches: 2^{J+1} - 1.
    int max_degree() const noexcept { return (1 << (max_level_ + 1)) - 1; }
    CubatureScheme scheme() const noexcept { return scheme_; }
    const WindowFunction& window() const noexcept { return window_; }

    static int band_min(int j) noexcept { return j == 0 ? 1 : (1 << (j - 1)) + 1; }
    static int band_max(int j) noexcept { return (1 << (j + 1)) - 1; }

    /// Cached b(l / 2^j); zero outside band(j).
    double band_weight(int j, int l) const;
    /// b(l / 2^j) for l = 0..max_degree().
    std::span<const double> band_weights(int j) const { return band_[check(j)]; }

    const CubatureSet& cubature(int j) const { return cubature_[check(j)]; }
    std::span<const double> sqrt_weights(int j) const { return sqrt_weights_[check(j)]; }
    std::size_t atom_count(int j) const { return cubature(j).size(); }
    std::size_t total_atoms() const noexcept { return offsets_.back(); }
    std::size_t level_offset(int j) const { return offsets_[check(j)]; }

    NeedletAtom atom(int j, std::size_t eta) const;

private:
    std::size_t check(int j) const;

    int max_level_;
    WindowFunction window_;
    CubatureScheme scheme_;
    std::vector<CubatureSet> cubature_;
    std::vector<std::vector<double>> band_;
    std::vector<std::vector<double>> sqrt_weights_;
    std::vector<std::size_t> offsets_;
};

/// One real value per atom, laid out level by level.
class NeedletCoefficients {
public:
    NeedletCoefficients() = default;
    explicit NeedletCoefficients(const NeedletFrame& frame);

    int max_level() const noexcept { return static_cast<int>(offsets_.size()) - 2; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator()(int j, std::size_t eta) { return values_[offsets_[j] + eta]; }
    double operator()(int j, std::size_t eta) const { return values_[offsets_[j] + eta]; }

    std::span<double> level(int j) { return {values_.data() + offsets_[j], offsets_[j + 1] - offsets_[j]}; }
    std::span<const double> level(int j) const
    {
        return {values_.data() + offsets_[j], offsets_[j + 1] - offsets_[j]};
    }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<double> values_;
};

/// psi_{j eta}(x) = sqrt(lambda) Sum_{l in band(j)} b(l/2^j) L_l(<x, center>).
double atom_eval(const NeedletFrame& frame, int j, std::size_t eta, const SphereDirection& x);

/// psi^{lm}_{j eta} = (psi_{j eta}, Y^l_m) = sqrt(lambda) b(l/2^j) conj(Y^l_m(center)), l in band(j).
std::map<std::pair<int, int>, cplx> atom_harmonic_coeffs(const NeedletFrame& frame, int j,
                                                          std::size_t eta);

/// ||psi_{j eta}||_2^2 from the harmonic side: lambda Sum_l b^2(l/2^j) (2l+1)/(4 pi).
double atom_norm_sq(const NeedletFrame& frame, int j, std::size_t eta);

/// beta_{j eta} = (f, psi_{j eta}) = Sum_{lm} f^l_m conj(psi^{lm}_{j eta}).
/// If `max_imag` is given it receives the largest discarded imaginary part.
NeedletCoefficients frame_analysis(const NeedletFrame& frame, const SphericalSpectrum& spectrum,
                                   double* max_imag = nullptr);

struct NeedletTerm {
    int j = 0;
    std::size_t eta = 0;
    double beta = 0.0;
};

/// x -> constant + Sum beta psi_{j eta}(x). Self-contained: keeps copies of the atoms it needs.
class NeedletSeries {
public:
    NeedletSeries(const NeedletFrame& frame, double constant_term, std::vector<NeedletTerm> terms);

    /// Direct sum of atoms.
    double operator()(const SphereDirection& x) const;
    /// Batch evaluation through the harmonic representation (parallel kernel).
    std::vector<double> evaluate(std::span<const SphereDirection> points) const;

    /// Exact spherical-harmonic coefficients of the series.
    const SphericalSpectrum& spectrum() const noexcept { return spectrum_; }
    double constant_term() const noexcept { return constant_; }
    std::span<const NeedletTerm> terms() const noexcept { return terms_; }

private:
    struct Atom {
        Vec3 center;
        double scale;
        int j;
        double beta;
    };
    double constant_;
    std::vector<NeedletTerm> terms_;
    std::vector<Atom> atoms_;
    std::vector<std::vector<double>> band_;
    int max_degree_;
    SphericalSpectrum spectrum_;
};

NeedletSeries frame_synthesis(const NeedletFrame& frame, const NeedletCoefficients& beta,
                              double constant_term);

/// || ( 2^{j[s + 2(1/2 - 1/pi)]} ||beta_{j.}||_{l^pi} )_j ||_{l^r}; pi or r may be +infinity.
double besov_seminorm(const NeedletCoefficients& beta, double s, double pi, double r);

}  // namespace sphdeconv
