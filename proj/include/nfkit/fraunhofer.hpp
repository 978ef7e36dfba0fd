#pragma once

namespace nfkit {

enum class FraunhoferBranch { Transition, OffBoresight };

struct FraunhoferResult {
    double distance = 0.0;                               // meters
    FraunhoferBranch branch = FraunhoferBranch::OffBoresight;
    double theta_f = 0.0;                                // Fraunhofer angle, radians
};

// First three terms of the binomial expansion of the differential phase
// between a point at (r, theta) seen from the origin and from an element at
// distance d' along the array axis, plus the exact value 2pi(r' - r)/lambda.
struct PhaseDelayBreakdown {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta3 = 0.0;
    double exact = 0.0;

    double truncated() const { return delta1 + delta2 + delta3; }
};

struct FraunhoferAngle {
    double exact = 0.0;
    double approx = 0.0;
};

// Pieces of the piecewise rule evaluated at the switch angle pi/2 - theta_f.
struct BranchLimits {
    double boundary_theta = 0.0;
    double transition_limit = 0.0;   // limit of the transition branch from inside
    double off_boresight_value = 0.0; // 8 D^2 sin^2 / lambda at the boundary
};

// Requires r > d_prime > 0.
PhaseDelayBreakdown phase_delay_terms(double r, double theta, double d_prime, double wavelength);

// 2 D^2 sin^2(theta) / lambda.
double fraunhofer_single(double D, double wavelength, double theta);

// 8 |cos| sin^2, the function whose inverse defines the Fraunhofer angle.
double fraunhofer_shape(double theta);

// Exact value by bisection and the closed-form 0.5 asin(lambda / 8D).
// DomainError when D / lambda < 0.5.
FraunhoferAngle fraunhofer_angle(double D, double wavelength);

FraunhoferResult fraunhofer_array(double D, double wavelength, double theta);

BranchLimits fraunhofer_branch_limits(double D, double wavelength);

// |lhs - d| / d of (2D^2/lambda) sin^2 (1 + min{1, 2 d |cos| / D})^2 = d.
double fraunhofer_residual(double D, double wavelength, double theta, double d);

// 8 D^2 cos^2(theta_f) / lambda.
double max_fraunhofer(double D, double wavelength);

// Largest ground distance covered by an array at height h (vertical axis).
double coverage_distance(double h, double D, double wavelength);

} // namespace nfkit
