#include "nfkit/focusing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

#include "nfkit/constants.hpp"
#include "nfkit/errors.hpp"
#include "nfkit/fraunhofer.hpp"
#include "nfkit/numeric/quadrature.hpp"
#include "nfkit/parallel.hpp"

namespace nfkit {

namespace {

Beamformer mrt_from_distances(const std::vector<double>& rn, double wavelength)
{
    std::vector<cplx> w;
    w.reserve(rn.size());
    for (double d : rn) {
        if (!(d > 1e-12 * wavelength))
            throw SingularityError("MRT target coincides with an array element");
        w.push_back(std::polar(1.0, kTwoPi * d / wavelength));
    }
    return Beamformer(std::move(w));
}

// Focusing is only meaningful inside the maximum Fraunhofer distance. Arrays
// smaller than half a wavelength have no defined boundary and are not checked.
bool beyond_near_field(const ArrayGeometry& geometry, double r)
{
    const double D = geometry.aperture_diameter();
    const double lambda = geometry.wavelength();
    if (D / lambda < 0.5)
        return false;
    return r >= max_fraunhofer(D, lambda);
}

RadialProfile sample(std::shared_ptr<const RayEvaluator> ev, std::vector<double> grid)
{
    RadialProfile p;
    p.radii = std::move(grid);
    p.magnitudes.assign(p.radii.size(), 0.0);
    parallel_for(p.radii.size(), [&](std::size_t i) { p.magnitudes[i] = ev->magnitude(p.radii[i]); });
    p.sampler = [ev](double t) { return ev->magnitude(t); };
    return p;
}

// Vertex of the parabola through three points with x0 < x1 < x2.
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2)
{
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curv = (d12 - d01) / (x2 - x0);
    if (!(curv < 0.0))
        return x1;
    const double xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
    return std::clamp(xv, x0, x2);
}

double magnitude_at(const RadialProfile& profile, double r)
{
    if (profile.sampler)
        return profile.sampler(r);
    const auto& x = profile.radii;
    const auto& y = profile.magnitudes;
    auto it = std::upper_bound(x.begin(), x.end(), r);
    if (it == x.begin())
        return y.front();
    if (it == x.end())
        return y.back();
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    const double f = (r - x[j - 1]) / (x[j] - x[j - 1]);
    return y[j - 1] + f * (y[j] - y[j - 1]);
}

} // namespace

Beamformer mrt(const ArrayGeometry& geometry, const SphericalPoint& target)
{
    return mrt_from_distances(element_distances(geometry, target), geometry.wavelength());
}

Beamformer mrt(const ArrayGeometry& geometry, const Position3& target)
{
    return mrt_from_distances(element_distances(geometry, target), geometry.wavelength());
}

std::vector<double> make_grid(double lo, double hi, int n_points, GridSpacing spacing)
{
    if (!(lo > 0.0) || !(hi > lo))
        throw ParameterError("profile window needs 0 < r_min < r_max");
    if (n_points < 3)
        throw ParameterError("profile needs at least three points");
    std::vector<double> g(static_cast<std::size_t>(n_points));
    const double last = n_points - 1;
    for (int i = 0; i < n_points; ++i) {
        const double f = i / last;
        g[i] = spacing == GridSpacing::Log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

RadialProfile radial_profile(const ChannelModel& model, const ArrayGeometry& geometry, double theta, double phi,
                             std::span<const cplx> weights, double r_min, double r_max, int n_points,
                             GridSpacing spacing)
{
    auto ev = std::make_shared<const RayEvaluator>(RayEvaluator::radial(model, geometry, theta, phi, weights));
    RadialProfile p = sample(ev, make_grid(r_min, r_max, n_points, spacing));
    p.theta = theta;
    p.phi = phi;
    p.model = model.kind;
    p.weights.assign(weights.begin(), weights.end());
    return p;
}

RadialProfile radial_profile(const ChannelModel& model, const ArrayGeometry& geometry, double theta, double phi,
                             const Beamformer& beamformer, double r_min, double r_max, int n_points,
                             GridSpacing spacing)
{
    return radial_profile(model, geometry, theta, phi, beamformer.weights(), r_min, r_max, n_points, spacing);
}

RadialProfile line_profile(const ChannelModel& model, const ArrayGeometry& geometry, const Position3& origin,
                           const Position3& dir, std::span<const cplx> weights, double t_min, double t_max,
                           int n_points, GridSpacing spacing)
{
    auto ev = std::make_shared<const RayEvaluator>(model, geometry, origin, dir, weights);
    RadialProfile p = sample(ev, make_grid(t_min, t_max, n_points, spacing));
    const Position3 u = (1.0 / norm(dir)) * dir;
    p.theta = std::acos(std::clamp(u.z, -1.0, 1.0));
    p.phi = std::atan2(u.y, u.x);
    if (p.phi < 0.0)
        p.phi += kTwoPi;
    p.model = model.kind;
    p.weights.assign(weights.begin(), weights.end());
    return p;
}

RadialFocusReport find_focal_points(const RadialProfile& profile)
{
    const auto& x = profile.radii;
    const auto& y = profile.magnitudes;
    if (x.size() != y.size())
        throw ParameterError("profile radii and magnitudes differ in length");

    RadialFocusReport report;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1]))
            continue;

        double xr;
        double yr;
        if (profile.sampler) {
            // Five sub-steps on each side of the coarse maximum.
            constexpr int kSub = 5;
            std::array<double, 2 * kSub + 1> fx{};
            std::array<double, 2 * kSub + 1> fy{};
            for (int j = 0; j <= kSub; ++j) {
                fx[j] = x[i - 1] + (x[i] - x[i - 1]) * j / kSub;
                fx[kSub + j] = x[i] + (x[i + 1] - x[i]) * j / kSub;
            }
            for (std::size_t j = 0; j < fx.size(); ++j)
                fy[j] = j == 0 ? y[i - 1] : j == kSub ? y[i] : j + 1 == fx.size() ? y[i + 1] : profile.sampler(fx[j]);
            std::size_t best = kSub;
            for (std::size_t j = 1; j + 1 < fx.size(); ++j)
                if (fy[j] > fy[best])
                    best = j;
            xr = parabola_vertex(fx[best - 1], fy[best - 1], fx[best], fy[best], fx[best + 1], fy[best + 1]);
            yr = profile.sampler(xr);
            if (yr < fy[best]) {
                xr = fx[best];
                yr = fy[best];
            }
        } else {
            xr = parabola_vertex(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]);
            // Parabola value at the vertex.
            const double d01 = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
            const double d12 = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
            const double curv = (d12 - d01) / (x[i + 1] - x[i - 1]);
            yr = y[i - 1] + d01 * (xr - x[i - 1]) + curv * (xr - x[i - 1]) * (xr - x[i]);
            yr = std::max(yr, y[i]);
        }
        report.focal_radii.push_back(xr);
        report.focal_magnitudes.push_back(yr);
    }
    return report;
}

DepthBracket focal_depth_3db(const RadialProfile& profile, double focal_radius)
{
    const auto& x = profile.radii;
    const auto& y = profile.magnitudes;
    if (x.size() < 2 || !(focal_radius >= x.front() && focal_radius <= x.back()))
        throw ParameterError("focal radius lies outside the profile");

    const double peak = std::max(magnitude_at(profile, focal_radius), 0.0);
    const double level = peak / std::sqrt(2.0);
    DepthBracket out;

    // Index of the last sample at or below the focal radius.
    const std::size_t i0 = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), focal_radius) - x.begin()) - 1;

    double xp = focal_radius;
    double yp = peak;
    for (std::size_t j = i0 + 1; j-- > 0;) {
        if (x[j] == focal_radius)
            continue;
        if (y[j] < level) {
            out.lo = x[j] + (level - y[j]) * (xp - x[j]) / (yp - y[j]);
            break;
        }
        xp = x[j];
        yp = y[j];
    }

    xp = focal_radius;
    yp = peak;
    for (std::size_t j = i0 + 1; j < x.size(); ++j) {
        if (y[j] < level) {
            out.hi = xp + (yp - level) * (x[j] - xp) / (yp - y[j]);
            break;
        }
        xp = x[j];
        yp = y[j];
    }
    return out;
}

void classify_focus(RadialFocusReport& report, const RadialProfile& profile, double target_r)
{
    report.target = target_r;
    report.dominant_focal.reset();
    report.gap.reset();
    report.depth_3db = {};
    report.property3_holds = false;

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < report.focal_radii.size(); ++i)
        if (report.focal_radii[i] < target_r && (!best || report.focal_radii[i] > report.focal_radii[*best]))
            best = i;
    if (!best)
        return;

    const double rf = report.focal_radii[*best];
    report.dominant_focal = rf;
    report.gap = target_r - rf;
    report.depth_3db = focal_depth_3db(profile, rf);
    report.property3_holds = report.focal_magnitudes[*best] > magnitude_at(profile, target_r);
}

RadialFocusReport focal_gap(const ChannelModel& model, const ArrayGeometry& geometry, double target_r, double theta,
                            double phi, const FocalGapOptions& options)
{
    if (!(target_r > 0.0))
        throw ParameterError("target radius must be positive");
    if (beyond_near_field(geometry, target_r))
        throw DomainError("target lies beyond the maximum Fraunhofer distance; no radial focusing possible");

    const Beamformer b = mrt(geometry, SphericalPoint{target_r, theta, phi});
    const RadialProfile p = radial_profile(model, geometry, theta, phi, b, options.r_min_fraction * target_r,
                                           options.r_max_fraction * target_r, options.n_points, options.spacing);
    RadialFocusReport report = find_focal_points(p);
    classify_focus(report, p, target_r);
    return report;
}

Algorithm1Result algorithm1_focus(const ChannelModel& model, const ArrayGeometry& geometry, double r_f, double theta,
                                  double phi, const Algorithm1Options& opt)
{
    if (!(r_f > 0.0))
        throw ParameterError("desired focal radius must be positive");
    if (!(opt.epsilon > 0.0) || opt.max_iterations < 1)
        throw ParameterError("algorithm needs epsilon > 0 and a positive iteration cap");
    if (beyond_near_field(geometry, r_f))
        throw InfeasibleError("desired focal radius lies beyond the maximum Fraunhofer distance");

    const double h = opt.slope_step_fraction * r_f;
    struct Probe {
        double y_hat;
        double slope;
    };
    auto probe = [&](double r_bar) {
        const Beamformer b = mrt(geometry, SphericalPoint{r_bar, theta, phi});
        const RayEvaluator ev = RayEvaluator::radial(model, geometry, theta, phi, b.weights());
        const double y = ev.magnitude(r_f);
        return Probe{y, (y - ev.magnitude(r_f - h)) / h};
    };
    auto achieved = [&](double r_bar) -> std::optional<double> {
        if (beyond_near_field(geometry, r_bar))
            return std::nullopt;
        return focal_gap(model, geometry, r_bar, theta, phi, opt.scan).dominant_focal;
    };

    Algorithm1Result out;
    double eps = opt.epsilon;
    auto push = [&](double r_bar) {
        const Probe pr = probe(r_bar);
        Algorithm1Step s;
        s.k = static_cast<int>(out.trace.size()) + 1;
        s.r_bar = r_bar;
        s.y_hat = pr.y_hat;
        s.slope = pr.slope;
        if (opt.trace_focal)
            s.achieved_focal = achieved(r_bar);
        out.trace.push_back(s);
    };

    push(r_f);
    std::size_t lo_idx = 0;
    for (;;) {
        if (out.loop_iterations >= opt.max_iterations)
            throw InfeasibleError("no radial focal point reached the desired radius within the iteration cap");
        push(out.trace.back().r_bar * (1.0 + eps));
        ++out.loop_iterations;

        const std::size_t k = out.trace.size();
        // The first slope is seeded with -1 so the loop always takes a step.
        const double prev = k == 2 ? -1.0 : out.trace[k - 2].slope;
        if (out.trace.back().slope * prev > 0.0)
            continue;

        lo_idx = k >= 3 ? k - 3 : 0;
        if (out.trace[lo_idx].slope < 0.0 && out.trace.back().slope >= 0.0)
            break;
        // Bracket unusable: restart from r_bar_{k-2} with a finer step.
        eps *= 0.5;
        out.trace.resize(lo_idx + 1);
    }

    double lo = out.trace[lo_idx].r_bar;
    double hi = out.trace.back().r_bar;
    const double tol = opt.bisection_tol_fraction * r_f;
    while (hi - lo > tol && out.bisection_iterations < 200) {
        const double mid = 0.5 * (lo + hi);
        if (probe(mid).slope < 0.0)
            lo = mid;
        else
            hi = mid;
        ++out.bisection_iterations;
    }

    out.epsilon_used = eps;
    out.r_bar_star = 0.5 * (lo + hi);
    out.beamformer = mrt(geometry, SphericalPoint{out.r_bar_star, theta, phi});
    out.achieved_focal = achieved(out.r_bar_star);
    out.within_tolerance =
        out.achieved_focal && std::abs(*out.achieved_focal - r_f) <= opt.focal_tolerance_fraction * r_f;
    return out;
}

std::vector<cplx> multi_focal_mrt(const ArrayGeometry& geometry, std::span<const Position3> targets)
{
    if (targets.empty())
        throw ParameterError("multi-focal beamformer needs at least one target");
    std::vector<cplx> w(geometry.size(), cplx{0.0, 0.0});
    for (const Position3& t : targets) {
        const Beamformer b = mrt(geometry, t);
        for (std::size_t n = 0; n < w.size(); ++n)
            w[n] += b.weights()[n];
    }
    double peak = 0.0;
    for (const cplx& v : w)
        peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0))
        throw NumericError("per-target beams cancel on every element");
    for (cplx& v : w)
        v /= peak;
    return w;
}

std::vector<cplx> multi_focal_mrt(const ArrayGeometry& geometry, std::span<const SphericalPoint> targets)
{
    std::vector<Position3> pts;
    pts.reserve(targets.size());
    for (const SphericalPoint& t : targets)
        pts.push_back(to_cartesian(t));
    return multi_focal_mrt(geometry, pts);
}

KappaResult kappa_direct(const ArrayGeometry& geometry, const SphericalPoint& target, const SphericalPoint& point,
                         const ChannelModel& model)
{
    const Beamformer b = mrt(geometry, target);
    const double at_target = std::abs(received_signal(channel_vector(model, geometry, target), b));
    const double at_point = std::abs(received_signal(channel_vector(model, geometry, point), b));
    if (!(at_target > 0.0))
        throw NumericError("coherent amplitude at the target vanished");
    return {geometry.n1(), geometry.n2(), at_point / at_target};
}

namespace {

numeric::QuadratureOptions kappa_quadrature() { return {1e-10, 0.0, 20000}; }

} // namespace

double kappa_c_integral(int n, double delta, double r, double theta)
{
    const double a = 2.0 * delta * r * std::cos(theta);
    auto f = [&](double m) { return 1.0 / std::sqrt(r * r - a * m + delta * delta * m * m); };
    return numeric::integrate_real(f, -0.5 * n, 0.5 * n, kappa_quadrature());
}

KappaDecomposition kappa_integral_decomposition(const ArrayGeometry& geometry, const SphericalPoint& target,
                                                const SphericalPoint& point)
{
    if (geometry.kind() != ArrayKind::ULA)
        throw ParameterError("integral decomposition is implemented for ULAs only");

    const double lambda = geometry.wavelength();
    const double delta = geometry.spacing();
    const int n = geometry.n1();
    const double r = point.r;
    const double r_bar = target.r;
    const double st = std::sin(point.theta);
    const double sb = std::sin(target.theta);

    KappaDecomposition out;
    out.eta1 = (kTwoPi / lambda) * delta * (std::cos(target.theta) - std::cos(point.theta));
    out.eta2 = (kPi * delta * delta / lambda) * (st * st / r - sb * sb / r_bar);

    const double a = 2.0 * delta * r * std::cos(point.theta);
    auto f = [&](double m) {
        const double den = std::sqrt(r * r - a * m + delta * delta * m * m);
        return std::polar(1.0 / den, out.eta1 * m + out.eta2 * m * m);
    };
    const cplx ab = numeric::integrate_complex(f, -0.5 * n, 0.5 * n, kappa_quadrature());
    out.a_n = ab.real();
    out.b_n = ab.imag();
    out.c_n = kappa_c_integral(n, delta, r_bar, target.theta);
    out.kappa_est = std::hypot(out.a_n, out.b_n) / out.c_n;
    return out;
}

} // namespace nfkit
