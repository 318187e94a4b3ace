#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "sphdeconv/geometry.hpp"

namespace sphdeconv {

enum class CubatureScheme { EqualArea, GaussProduct };

/// Immutable point set with positive weights (steradians) summing to 4 pi.
class CubatureSet {
public:
    CubatureSet(CubatureScheme scheme, int level_or_degree, std::vector<SphereDirection> points,
                std::vector<double> weights);

    CubatureScheme scheme() const noexcept { return scheme_; }
    /// Resolution level j for EqualArea, polynomial degree L for GaussProduct.
    int level_or_degree() const noexcept { return level_or_degree_; }
    std::size_t size() const noexcept { return points_.size(); }

    std::span<const SphereDirection> points() const noexcept { return points_; }
    std::span<const double> weights() const noexcept { return weights_; }
    const SphereDirection& point(std::size_t k) const { return points_[k]; }
    double weight(std::size_t k) const { return weights_[k]; }

    /// Highest harmonic degree the rule integrates exactly (GaussProduct: 2L+1). EqualArea
    /// pixel centres are never exact; they report the nominal 2 N_side to which their
    /// quadrature error stays at the percent level.
    int exact_degree() const noexcept;

    template <class F>
    double integrate(F&& f) const
    {
        double acc = 0.0;
        for (std::size_t k = 0; k < points_.size(); ++k) acc += weights_[k] * f(points_[k]);
        return acc;
    }

private:
    CubatureScheme scheme_;
    int level_or_degree_;
    std::vector<SphereDirection> points_;
    std::vector<double> weights_;
};

/// Ring-ordered centres of the equal-area pixelization with N_side = 2^j (12 * 4^j points),
/// each weighted 4 pi / (12 * 4^j).
CubatureSet equal_area_points(int level);

/// (L+1) Gauss-Legendre colatitudes x (2L+2) equispaced longitudes; exact through degree 2L+1.
CubatureSet gauss_product_grid(int max_degree);

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// theta,phi,weight rows with a header line.
void write_csv(const CubatureSet& set, std::ostream& os);

}  // namespace sphdeconv
