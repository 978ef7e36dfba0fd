#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nfkit {

struct Position3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// r in meters, theta from +z in [0, pi], phi from +x in [0, 2pi).
struct SphericalPoint {
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

// Throws ParameterError when r is negative/non-finite or an angle is out of range.
SphericalPoint make_spherical(double r, double theta, double phi);

Position3 to_cartesian(const SphericalPoint& point);
// Unit direction k(theta, phi).
Position3 direction(double theta, double phi);

double dot(const Position3& a, const Position3& b);
double norm(const Position3& a);
Position3 operator-(const Position3& a, const Position3& b);
Position3 operator+(const Position3& a, const Position3& b);
Position3 operator*(double s, const Position3& a);

enum class ArrayKind { ULA, UPA };

// ULA along z, UPA in the xz-plane (n1 rows along z, n2 columns along x).
// The layout is always centered on the origin; odd counts put an element there.
class ArrayGeometry {
public:
    ArrayGeometry(ArrayKind kind, int n1, int n2, double spacing, double wavelength);

    ArrayKind kind() const { return kind_; }
    int n1() const { return n1_; }
    int n2() const { return n2_; }
    std::size_t size() const { return positions_.size(); }
    double spacing() const { return spacing_; }
    double wavelength() const { return wavelength_; }
    // Largest element-to-element distance: (n1-1)d for a ULA, the grid diagonal for a UPA.
    double aperture_diameter() const { return aperture_; }
    std::span<const Position3> positions() const { return positions_; }
    const Position3& position(std::size_t index) const { return positions_[index]; }
    // Element nearest the origin, smallest index on ties.
    std::size_t reference_index() const { return reference_; }

    // Element index for grid coordinates (i along z, j along x).
    std::size_t index(int i, int j = 0) const { return static_cast<std::size_t>(j) * n1_ + i; }

private:
    ArrayKind kind_;
    int n1_;
    int n2_;
    double spacing_;
    double wavelength_;
    double aperture_ = 0.0;
    std::size_t reference_ = 0;
    std::vector<Position3> positions_;
};

ArrayGeometry build_array(ArrayKind kind, int n1, int n2, double spacing, double wavelength);

// Uniform half-wave (or other) spaced ULA helper used all over the tests and the CLI.
ArrayGeometry make_ula(int n, double spacing, double wavelength);
ArrayGeometry make_upa(int n1, int n2, double spacing, double wavelength);

// r_n = sqrt(r^2 - 2 r k.s_n + |s_n|^2) for every element.
std::vector<double> element_distances(const ArrayGeometry& geometry, const SphericalPoint& point);
// Same, for an arbitrary point given in Cartesian coordinates.
std::vector<double> element_distances(const ArrayGeometry& geometry, const Position3& point);

} // namespace nfkit
