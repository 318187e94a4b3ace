#pragma once

#include <array>

namespace sphdeconv {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kFourPi = 4.0 * kPi;

/// Point on the unit sphere in colatitude/longitude form.
struct SphereDirection {
    double theta = 0.0;  ///< colatitude in [0, pi]
    double phi = 0.0;    ///< longitude in [0, 2 pi)

    /// (cos phi sin theta, sin phi sin theta, cos theta)
    Vec3 unit_vector() const;

    /// Inverse of unit_vector(); the input is normalised first. Longitude wrapped into [0, 2 pi).
    static SphereDirection from_vector(const Vec3& v);
};

/// Great-circle distance arccos<x, y>, evaluated as atan2(|x cross y|, <x, y>) for accuracy near 0 and pi.
double geodesic_distance(const SphereDirection& x, const SphereDirection& y);

double dot(const Vec3& a, const Vec3& b);

/// Rotation g = u(phi) a(theta) u(psi): u about Oz, a about Oy, both counterclockwise on column vectors.
struct EulerRotation {
    double phi = 0.0;
    double theta = 0.0;
    double psi = 0.0;

    Mat3 matrix() const;
    Vec3 apply(const Vec3& v) const;
    SphereDirection apply(const SphereDirection& x) const;
};

Mat3 rotation_z(double angle);
Mat3 rotation_y(double angle);
Mat3 multiply(const Mat3& a, const Mat3& b);
Vec3 multiply(const Mat3& a, const Vec3& v);

}  // namespace sphdeconv
