#include "nfkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nfkit/constants.hpp"
#include "nfkit/errors.hpp"

namespace nfkit {

SphericalPoint make_spherical(double r, double theta, double phi)
{
    if (!std::isfinite(r) || r < 0.0)
        throw ParameterError("radius must be finite and non-negative");
    if (!(theta >= 0.0 && theta <= kPi))
        throw ParameterError("theta must lie in [0, pi]");
    if (!(phi >= 0.0 && phi < kTwoPi))
        throw ParameterError("phi must lie in [0, 2pi)");
    return {r, theta, phi};
}

Position3 direction(double theta, double phi)
{
    const double s = std::sin(theta);
    return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

Position3 to_cartesian(const SphericalPoint& point) { return point.r * direction(point.theta, point.phi); }

double dot(const Position3& a, const Position3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Position3& a) { return std::sqrt(dot(a, a)); }
Position3 operator-(const Position3& a, const Position3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Position3 operator+(const Position3& a, const Position3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Position3 operator*(double s, const Position3& a) { return {s * a.x, s * a.y, s * a.z}; }

namespace {

// Offset of grid index i from the array center, in units of spacing.
double centered(int i, int count) { return i - 0.5 * (count - 1); }

} // namespace

ArrayGeometry::ArrayGeometry(ArrayKind kind, int n1, int n2, double spacing, double wavelength)
    : kind_(kind), n1_(n1), n2_(n2), spacing_(spacing), wavelength_(wavelength)
{
    if (n1 < 1 || n2 < 1)
        throw ParameterError("element counts must be at least 1");
    if (kind == ArrayKind::ULA && n2 != 1)
        throw ParameterError("a ULA has n2 = 1");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw ParameterError("spacing must be positive");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw ParameterError("wavelength must be positive");

    positions_.reserve(static_cast<std::size_t>(n1) * n2);
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i)
            positions_.push_back({centered(j, n2) * spacing, 0.0, centered(i, n1) * spacing});

    const double a = (n1 - 1) * spacing;
    const double b = (n2 - 1) * spacing;
    aperture_ = std::hypot(a, b);

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < positions_.size(); ++k) {
        const double d = norm(positions_[k]);
        if (d < best) {
            best = d;
            reference_ = k;
        }
    }
}

ArrayGeometry build_array(ArrayKind kind, int n1, int n2, double spacing, double wavelength)
{
    return ArrayGeometry(kind, n1, n2, spacing, wavelength);
}

ArrayGeometry make_ula(int n, double spacing, double wavelength)
{
    return ArrayGeometry(ArrayKind::ULA, n, 1, spacing, wavelength);
}

ArrayGeometry make_upa(int n1, int n2, double spacing, double wavelength)
{
    return ArrayGeometry(ArrayKind::UPA, n1, n2, spacing, wavelength);
}

namespace {

std::vector<double> distances_along(const ArrayGeometry& geometry, double r, const Position3& k)
{
    std::vector<double> out;
    out.reserve(geometry.size());
    for (const Position3& s : geometry.positions()) {
        const double radicand = r * r - 2.0 * r * dot(k, s) + dot(s, s);
        out.push_back(std::sqrt(std::max(radicand, 0.0)));
    }
    return out;
}

} // namespace

std::vector<double> element_distances(const ArrayGeometry& geometry, const SphericalPoint& point)
{
    if (!(point.r >= 0.0))
        throw ParameterError("radius must be non-negative");
    return distances_along(geometry, point.r, direction(point.theta, point.phi));
}

std::vector<double> element_distances(const ArrayGeometry& geometry, const Position3& point)
{
    const double r = norm(point);
    const Position3 k = r > 0.0 ? (1.0 / r) * point : Position3{0.0, 0.0, 1.0};
    return distances_along(geometry, r, k);
}

} // namespace nfkit
