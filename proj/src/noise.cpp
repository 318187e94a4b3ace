#include "sphdeconv/noise.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <sstream>

#include "sphdeconv/error.hpp"
#include "sphdeconv/kernels.hpp"

namespace sphdeconv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_diagonal(const Eigen::MatrixXcd& m)
{
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            if (r != c && m(r, c) != cplx{0.0, 0.0}) return false;
    return true;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m)
{
    if (is_diagonal(m)) {
        Eigen::VectorXd s = m.diagonal().cwiseAbs();
        std::sort(s.data(), s.data() + s.size(), std::greater<>());
        return s;
    }
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
}

std::vector<Eigen::MatrixXcd> diagonal_blocks(int max_degree, auto&& entry)
{
    std::vector<Eigen::MatrixXcd> blocks;
    for (int l = 0; l <= max_degree; ++l) {
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2 * l + 1, 2 * l + 1);
        for (int m = -l; m <= l; ++m) b(m + l, m + l) = entry(l, m);
        blocks.push_back(std::move(b));
    }
    return blocks;
}

}  // namespace

std::string describe(const NoiseModel& model)
{
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const ZAxisUniform& z) { os << "zaxis(a=" << z.a << ")"; },
                   [&](const RotationalLaplace& r) { os << "laplace(rho2=" << r.rho2 << ")"; },
                   [&](const Rosenthal& r) { os << "rosenthal(theta=" << r.theta << ",p=" << r.p << ")"; },
                   [&](const EmpiricalNoise& e) { os << "empirical(n=" << e.rotations.size() << ")"; },
               },
               model);
    return os.str();
}

RotationalSpectrum::RotationalSpectrum(std::vector<Eigen::MatrixXcd> blocks) : blocks_(std::move(blocks))
{
    for (std::size_t l = 0; l < blocks_.size(); ++l)
        if (blocks_[l].rows() != static_cast<Eigen::Index>(2 * l + 1) || blocks_[l].cols() != blocks_[l].rows())
            throw PreconditionError("RotationalSpectrum: block " + std::to_string(l) + " has wrong shape");
}

const Eigen::MatrixXcd& RotationalSpectrum::block(int l) const
{
    if (l < 0 || l > max_degree())
        throw DomainError("RotationalSpectrum: no block at degree " + std::to_string(l));
    return blocks_[l];
}

cplx zaxis_uniform_factor(int m, double a)
{
    if (m == 0 || a == 0.0) return {1.0, 0.0};
    const double half = 0.5 * m * a;
    return std::polar(std::sin(half) / half, -half);
}

RotationalSpectrum noise_spectrum(const NoiseModel& model, int max_degree)
{
    if (max_degree < 0) throw DomainError("noise_spectrum: negative max degree");
    return std::visit(
        overloaded{
            [&](const ZAxisUniform& z) {
                if (z.a < 0.0) throw DomainError("ZAxisUniform: support must be nonnegative");
                return RotationalSpectrum(diagonal_blocks(
                    max_degree, [&](int, int m) { return zaxis_uniform_factor(m, z.a); }));
            },
            [&](const RotationalLaplace& r) {
                if (!(r.rho2 > 0.0)) throw DomainError("RotationalLaplace: rho^2 must be positive");
                return RotationalSpectrum(diagonal_blocks(max_degree, [&](int l, int) {
                    return cplx{1.0 / (1.0 + r.rho2 * l * (l + 1.0)), 0.0};
                }));
            },
            [&](const Rosenthal& r) {
                if (!(r.theta > 0.0 && r.theta <= kPi))
                    throw DomainError("Rosenthal: theta must lie in (0, pi]");
                if (!(r.p > 0.0)) throw DomainError("Rosenthal: p must be positive");
                return RotationalSpectrum(diagonal_blocks(max_degree, [&](int l, int) {
                    const double ratio =
                        std::sin((l + 0.5) * r.theta) / ((2.0 * l + 1.0) * std::sin(0.5 * r.theta));
                    if (ratio < 0.0 && r.p != std::floor(r.p))
                        throw DomainError("Rosenthal: negative base at degree " + std::to_string(l) +
                                          " needs an integer exponent");
                    return cplx{std::pow(ratio, r.p), 0.0};
                }));
            },
            [&](const EmpiricalNoise& e) {
                if (e.rotations.empty()) throw PreconditionError("EmpiricalNoise: no rotation samples");
                auto blocks = kernels::parallel::rotation_moments(e.rotations, max_degree);
                const double inv_n = 1.0 / static_cast<double>(e.rotations.size());
                for (auto& b : blocks) b *= inv_n;
                return RotationalSpectrum(std::move(blocks));
            },
        },
        model);
}

double block_condition(const RotationalSpectrum& spec, int l)
{
    const Eigen::VectorXd s = singular_values(spec.block(l));
    const double smin = s(s.size() - 1);
    if (smin == 0.0 || !std::isfinite(smin)) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

Eigen::MatrixXcd inverse_block(const RotationalSpectrum& spec, int l, double cond_limit)
{
    const Eigen::MatrixXcd& b = spec.block(l);
    const double cond = block_condition(spec, l);
    if (!(cond <= cond_limit)) throw IllConditionedDegree(l, cond);
    if (is_diagonal(b)) {
        Eigen::MatrixXcd inv = Eigen::MatrixXcd::Zero(b.rows(), b.cols());
        for (Eigen::Index i = 0; i < b.rows(); ++i) inv(i, i) = 1.0 / b(i, i);
        return inv;
    }
    return b.fullPivLu().inverse();
}

InverseSpectrum::InverseSpectrum(std::vector<Eigen::MatrixXcd> blocks, std::vector<int> excluded)
    : blocks_(std::move(blocks)), excluded_(std::move(excluded))
{
}

bool InverseSpectrum::excluded(int l) const
{
    return std::find(excluded_.begin(), excluded_.end(), l) != excluded_.end();
}

const Eigen::MatrixXcd& InverseSpectrum::block(int l) const
{
    if (l < 0 || l > max_degree())
        throw DomainError("InverseSpectrum: degree " + std::to_string(l) + " is missing");
    return blocks_[l];
}

InverseSpectrum invert(const RotationalSpectrum& spec, double cond_limit)
{
    std::vector<Eigen::MatrixXcd> blocks;
    std::vector<int> excluded;
    for (int l = 0; l <= spec.max_degree(); ++l) {
        try {
            blocks.push_back(inverse_block(spec, l, cond_limit));
        } catch (const IllConditionedDegree&) {
            blocks.emplace_back();
            excluded.push_back(l);
        }
    }
    return InverseSpectrum(std::move(blocks), std::move(excluded));
}

double op_norm(const RotationalSpectrum& spec, int l) { return singular_values(spec.block(l))(0); }

DipEstimate dip_estimate(const RotationalSpectrum& spec, int l_lo, int l_hi)
{
    if (l_lo < 1 || l_hi - l_lo < 2)
        throw PreconditionError("dip_estimate: need at least three degrees, all >= 1");
    std::vector<double> xs, ys;
    for (int l = l_lo; l <= l_hi; ++l) {
        const Eigen::VectorXd s = singular_values(spec.block(l));
        const double smin = s(s.size() - 1);
        if (smin == 0.0) throw IllConditionedDegree(l, std::numeric_limits<double>::infinity());
        xs.push_back(std::log(static_cast<double>(l)));
        ys.push_back(std::log(1.0 / smin));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (my + slope * (xs[i] - mx));
        rss += r * r;
    }
    return {slope, std::sqrt(rss / n)};
}

EulerRotation sample_rotation(const NoiseModel& model, Rng& rng)
{
    const auto* z = std::get_if<ZAxisUniform>(&model);
    if (!z) throw PreconditionError("sample_rotation: only the z-axis uniform model can be sampled");
    return {rng.uniform(0.0, z->a), 0.0, 0.0};
}

nlohmann::json to_json(const RotationalSpectrum& spec)
{
    nlohmann::json blocks = nlohmann::json::array();
    for (int l = 0; l <= spec.max_degree(); ++l) {
        const auto& b = spec.block(l);
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index r = 0; r < b.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (Eigen::Index c = 0; c < b.cols(); ++c) row.push_back({b(r, c).real(), b(r, c).imag()});
            rows.push_back(std::move(row));
        }
        blocks.push_back(std::move(rows));
    }
    return {{"max_degree", spec.max_degree()}, {"blocks", std::move(blocks)}};
}

}  // namespace sphdeconv
