#include "nfkit/fraunhofer.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nfkit/constants.hpp"
#include "nfkit/errors.hpp"
#include "nfkit/numeric/roots.hpp"

namespace nfkit {

namespace {

void check_aperture(double D, double wavelength)
{
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw ParameterError("wavelength must be positive");
    if (!(D / wavelength >= 0.5) || !std::isfinite(D))
        throw DomainError("aperture must satisfy D / lambda >= 0.5");
}

void check_theta(double theta)
{
    if (!(theta >= 0.0 && theta <= kPi))
        throw ParameterError("theta must lie in [0, pi]");
}

// Angle t = pi/2 - theta solving 8 sin t cos^2 t = target on [0, t_max], where
// the left side increases. Solving in t keeps full relative precision for
// small Fraunhofer angles.
double solve_fraunhofer_angle(double target)
{
    const double t_max = 0.5 * kPi - std::acos(1.0 / std::sqrt(3.0));
    auto g = [target](double t) {
        const double c = std::cos(t);
        return 8.0 * std::sin(t) * c * c - target;
    };
    return numeric::bisect(g, 0.0, t_max, 0.0, 200);
}

// Core rule with the angle already known.
FraunhoferResult evaluate(double D, double wavelength, double theta, double theta_f)
{
    // Mirror into [0, pi/2]; pi - theta is exact there, so f(theta) and f(pi - theta) share one code path.
    if (theta > 0.5 * kPi)
        theta = kPi - theta;
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double a = 2.0 * D * D * s * s / wavelength;

    if (0.5 * kPi - theta >= theta_f) {
        const double d = theta == 0.0 ? 0.0 : 4.0 * a;
        return {d, FraunhoferBranch::OffBoresight, theta_f};
    }
    if (theta == 0.5 * kPi || c == 0.0)
        return {2.0 * D * D / wavelength, FraunhoferBranch::Transition, theta_f};

    // Smaller root of (4Ac^2/D^2) d^2 + (4Ac/D - 1) d + A = 0, written so that
    // nothing cancels as c -> 0.
    const double q = (D / wavelength) * fraunhofer_shape(theta);
    const double disc = std::max(1.0 - 2.0 * q, 0.0);
    const double d = 2.0 * a / ((1.0 - q) + std::sqrt(disc));
    return {d, FraunhoferBranch::Transition, theta_f};
}

} // namespace

PhaseDelayBreakdown phase_delay_terms(double r, double theta, double d_prime, double wavelength)
{
    if (!(d_prime > 0.0) || !(r > d_prime))
        throw ParameterError("phase delay terms need r > d' > 0");
    if (!(wavelength > 0.0))
        throw ParameterError("wavelength must be positive");
    check_theta(theta);

    const double c = std::cos(theta);
    const double s2 = std::sin(theta) * std::sin(theta);
    PhaseDelayBreakdown out;
    out.delta1 = -(kTwoPi / wavelength) * c * d_prime;
    out.delta2 = (kPi / wavelength) * s2 * d_prime * d_prime / r;
    out.delta3 = (kPi / wavelength) * c * s2 * d_prime * d_prime * d_prime / (r * r);
    // r' - r without cancellation.
    const double num = d_prime * d_prime - 2.0 * r * d_prime * c;
    const double r_prime = std::sqrt(r * r - 2.0 * r * d_prime * c + d_prime * d_prime);
    out.exact = kTwoPi * (num / (r_prime + r)) / wavelength;
    return out;
}

double fraunhofer_single(double D, double wavelength, double theta)
{
    if (!(D > 0.0) || !(wavelength > 0.0))
        throw ParameterError("aperture and wavelength must be positive");
    check_theta(theta);
    if (theta > 0.5 * kPi)
        theta = kPi - theta;
    if (theta == 0.0)
        return 0.0;
    const double s = std::sin(theta);
    return 2.0 * D * D * s * s / wavelength;
}

double fraunhofer_shape(double theta)
{
    const double s = std::sin(theta);
    return 8.0 * std::abs(std::cos(theta)) * s * s;
}

FraunhoferAngle fraunhofer_angle(double D, double wavelength)
{
    check_aperture(D, wavelength);
    const double target = wavelength / (2.0 * D);
    return {solve_fraunhofer_angle(target), 0.5 * std::asin(wavelength / (8.0 * D))};
}

FraunhoferResult fraunhofer_array(double D, double wavelength, double theta)
{
    check_aperture(D, wavelength);
    check_theta(theta);
    return evaluate(D, wavelength, theta, fraunhofer_angle(D, wavelength).exact);
}

BranchLimits fraunhofer_branch_limits(double D, double wavelength)
{
    check_aperture(D, wavelength);
    const double theta_f = fraunhofer_angle(D, wavelength).exact;
    const double theta_b = 0.5 * kPi - theta_f;
    const double s = std::sin(theta_b);
    const double a = 2.0 * D * D * s * s / wavelength;
    const double q = (D / wavelength) * fraunhofer_shape(theta_b);
    // The discriminant vanishes at the boundary (double root), so the limit
    // drops the square root term.
    return {theta_b, 2.0 * a / (1.0 - q), 4.0 * a};
}

double fraunhofer_residual(double D, double wavelength, double theta, double d)
{
    const double s = std::sin(theta);
    const double c = std::abs(std::cos(theta));
    const double factor = 1.0 + std::min(1.0, 2.0 * d * c / D);
    const double lhs = (2.0 * D * D / wavelength) * s * s * factor * factor;
    return std::abs(lhs - d) / d;
}

double max_fraunhofer(double D, double wavelength)
{
    check_aperture(D, wavelength);
    const double c = std::cos(fraunhofer_angle(D, wavelength).exact);
    return 8.0 * D * D * c * c / wavelength;
}

double coverage_distance(double h, double D, double wavelength)
{
    if (!(h >= 0.0) || !std::isfinite(h))
        throw ParameterError("height must be finite and non-negative");
    check_aperture(D, wavelength);

    const double theta_f = fraunhofer_angle(D, wavelength).exact;
    const double d_max = 8.0 * D * D / wavelength;
    // Positive where the ground point at distance x lies inside the Fraunhofer boundary.
    auto margin = [&](double x) {
        const double r = std::hypot(h, x);
        const double theta = std::atan2(x, h);
        return evaluate(D, wavelength, theta, theta_f).distance - r;
    };

    // The slant range never exceeds the maximum Fraunhofer distance, so the
    // feasible set sits inside (0, d_max]. Scan for the last feasible sample.
    constexpr int kSamples = 20000;
    int last = -1;
    for (int i = 1; i <= kSamples; ++i)
        if (margin(d_max * i / kSamples) >= 0.0)
            last = i;
    if (last < 0)
        return 0.0;
    if (last == kSamples)
        return d_max;

    const double lo = d_max * last / kSamples;
    const double hi = d_max * (last + 1) / kSamples;
    return numeric::bisect(margin, lo, hi, 1e-9 * hi, 200);
}

} // namespace nfkit
