#include "sphdeconv/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace sphdeconv {

Vec3 SphereDirection::unit_vector() const
{
    const double s = std::sin(theta);
    return {std::cos(phi) * s, std::sin(phi) * s, std::cos(theta)};
}

SphereDirection SphereDirection::from_vector(const Vec3& v)
{
    const double r = std::sqrt(dot(v, v));
    const double z = std::clamp(v[2] / r, -1.0, 1.0);
    // atan2 of the in-plane radius keeps precision near the poles, unlike acos(z)
    const double rho = std::hypot(v[0], v[1]) / r;
    double theta = std::atan2(rho, z);
    double phi = std::atan2(v[1], v[0]);
    if (phi < 0.0) phi += 2.0 * kPi;
    if (phi >= 2.0 * kPi) phi -= 2.0 * kPi;
    return {theta, phi};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double geodesic_distance(const SphereDirection& x, const SphereDirection& y)
{
    const Vec3 u = x.unit_vector(), v = y.unit_vector();
    const Vec3 w{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    return std::atan2(std::sqrt(dot(w, w)), dot(u, v));
}

Mat3 rotation_z(double angle)
{
    const double c = std::cos(angle), s = std::sin(angle);
    return {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

Mat3 rotation_y(double angle)
{
    const double c = std::cos(angle), s = std::sin(angle);
    return {{{c, 0.0, s}, {0.0, 1.0, 0.0}, {-s, 0.0, c}}};
}

Mat3 multiply(const Mat3& a, const Mat3& b)
{
    Mat3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    return out;
}

Vec3 multiply(const Mat3& a, const Vec3& v)
{
    return {a[0][0] * v[0] + a[0][1] * v[1] + a[0][2] * v[2],
            a[1][0] * v[0] + a[1][1] * v[1] + a[1][2] * v[2],
            a[2][0] * v[0] + a[2][1] * v[1] + a[2][2] * v[2]};
}

Mat3 EulerRotation::matrix() const
{
    return multiply(rotation_z(phi), multiply(rotation_y(theta), rotation_z(psi)));
}

Vec3 EulerRotation::apply(const Vec3& v) const { return multiply(matrix(), v); }

SphereDirection EulerRotation::apply(const SphereDirection& x) const
{
    // z-axis rotations are the common case; shift the longitude directly so the
    // colatitude is carried over bit-for-bit
    if (theta == 0.0) {
        double p = std::fmod(x.phi + phi + psi, 2.0 * kPi);
        if (p < 0.0) p += 2.0 * kPi;
        return {x.theta, p};
    }
    return SphereDirection::from_vector(apply(x.unit_vector()));
}

}  // namespace sphdeconv
