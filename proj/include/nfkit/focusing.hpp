#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nfkit/channel.hpp"
#include "nfkit/geometry.hpp"

namespace nfkit {

enum class GridSpacing { Log, Uniform };

// |y| sampled along a radial cut (or along any ray, see line_profile).
struct RadialProfile {
    std::vector<double> radii;      // strictly increasing, meters
    std::vector<double> magnitudes; // |y| at each radius
    double theta = 0.0;
    double phi = 0.0;
    ChannelModelKind model = ChannelModelKind::NUSW;
    std::vector<cplx> weights;
    // Evaluates |y| off the grid; used to refine maxima. May be empty.
    std::function<double(double)> sampler;
};

struct DepthBracket {
    std::optional<double> lo;
    std::optional<double> hi;
};

struct RadialFocusReport {
    std::vector<double> focal_radii;
    std::vector<double> focal_magnitudes;
    std::optional<double> target;         // MRT target radius when known
    std::optional<double> dominant_focal; // nearest focal radius below the target
    std::optional<double> gap;            // target - dominant_focal
    DepthBracket depth_3db;               // around the dominant focal point
    bool property3_holds = false;         // |y(focal)| > |y(target)|
};

// Conjugate-phase weights e^{j 2pi r_n / lambda} toward the target.
Beamformer mrt(const ArrayGeometry& geometry, const SphericalPoint& target);
Beamformer mrt(const ArrayGeometry& geometry, const Position3& target);

std::vector<double> make_grid(double lo, double hi, int n_points, GridSpacing spacing);

RadialProfile radial_profile(const ChannelModel& model, const ArrayGeometry& geometry, double theta, double phi,
                             std::span<const cplx> weights, double r_min, double r_max, int n_points,
                             GridSpacing spacing = GridSpacing::Log);
RadialProfile radial_profile(const ChannelModel& model, const ArrayGeometry& geometry, double theta, double phi,
                             const Beamformer& beamformer, double r_min, double r_max, int n_points,
                             GridSpacing spacing = GridSpacing::Log);

// Profile along origin + t*dir for t in [t_min, t_max]; `radii` holds t.
// theta/phi record the direction as seen from the array origin.
RadialProfile line_profile(const ChannelModel& model, const ArrayGeometry& geometry, const Position3& origin,
                           const Position3& dir, std::span<const cplx> weights, double t_min, double t_max,
                           int n_points, GridSpacing spacing = GridSpacing::Log);

// Interior local maxima, refined on a 5x finer local grid (when a sampler is
// present) and then by a three-point parabola. Endpoints are never reported.
RadialFocusReport find_focal_points(const RadialProfile& profile);

// Half-power bracket around a focal radius; open sides come back empty.
DepthBracket focal_depth_3db(const RadialProfile& profile, double focal_radius);

struct FocalGapOptions {
    double r_min_fraction = 1.0 / 12.0; // scan window as fractions of the target radius
    double r_max_fraction = 4.0 / 3.0;
    int n_points = 2000;
    GridSpacing spacing = GridSpacing::Log;
};

// MRT at target_r, radial scan, dominant focal point, gap and 3 dB depth.
RadialFocusReport focal_gap(const ChannelModel& model, const ArrayGeometry& geometry, double target_r, double theta,
                            double phi, const FocalGapOptions& options = {});

// Fills the dominant/gap/depth/property3 fields of a report for a known target.
void classify_focus(RadialFocusReport& report, const RadialProfile& profile, double target_r);

struct Algorithm1Options {
    double epsilon = 0.02;
    double bisection_tol_fraction = 1e-4; // of the desired focal radius
    int max_iterations = 500;
    double slope_step_fraction = 1e-5;    // backward-difference step in r, fraction of r_f
    double focal_tolerance_fraction = 2.5e-3;
    bool trace_focal = true;              // scan a profile per iteration for the achieved focal point
    FocalGapOptions scan;
};

struct Algorithm1Step {
    int k = 0;
    double r_bar = 0.0;
    double y_hat = 0.0; // |y(r_f, MRT(r_bar))|
    double slope = 0.0; // d|y|/dr at r_f
    std::optional<double> achieved_focal;
};

struct Algorithm1Result {
    Beamformer beamformer;
    double r_bar_star = 0.0;
    std::vector<Algorithm1Step> trace;
    int loop_iterations = 0;
    int bisection_iterations = 0;
    double epsilon_used = 0.0;
    std::optional<double> achieved_focal;
    bool within_tolerance = false;
};

// Sweeps the MRT target outward from r_f until the radial slope of |y| at r_f
// turns non-negative, then bisects the target so the focal point lands on r_f.
// InfeasibleError when the iteration cap is hit.
Algorithm1Result algorithm1_focus(const ChannelModel& model, const ArrayGeometry& geometry, double r_f, double theta,
                                  double phi, const Algorithm1Options& options = {});

// Equal-weight sum of per-target MRT vectors, scaled to max modulus 1.
std::vector<cplx> multi_focal_mrt(const ArrayGeometry& geometry, std::span<const Position3> targets);
std::vector<cplx> multi_focal_mrt(const ArrayGeometry& geometry, std::span<const SphericalPoint> targets);

struct KappaResult {
    int n1 = 0;
    int n2 = 0;
    double kappa = 0.0;
};

// |y(point, MRT(target))| / |y(target, MRT(target))| by direct summation.
KappaResult kappa_direct(const ArrayGeometry& geometry, const SphericalPoint& target, const SphericalPoint& point,
                         const ChannelModel& model = ChannelModel::nusw());

struct KappaDecomposition {
    double eta1 = 0.0;
    double eta2 = 0.0;
    double a_n = 0.0;
    double b_n = 0.0;
    double c_n = 0.0;
    double kappa_est = 0.0;
};

// Continuous-index estimate of kappa for a ULA: phase expanded to second order
// in n, sums replaced by integrals over n in [-N/2, N/2].
KappaDecomposition kappa_integral_decomposition(const ArrayGeometry& geometry, const SphericalPoint& target,
                                                const SphericalPoint& point);

// C_N alone for N elements of spacing delta at target distance r and angle theta.
double kappa_c_integral(int n, double delta, double r, double theta);

} // namespace nfkit
