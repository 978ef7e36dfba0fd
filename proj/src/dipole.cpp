#include "nfkit/dipole.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nfkit/constants.hpp"
#include "nfkit/errors.hpp"
#include "nfkit/numeric/quadrature.hpp"
#include "nfkit/numeric/roots.hpp"
#include "nfkit/parallel.hpp"

namespace nfkit {

namespace {

const cplx kJ{0.0, 1.0};

void check_alpha(int alpha, int lo)
{
    if (alpha < lo || alpha > 5)
        throw ParameterError("integral order alpha out of range");
}

// Panel edges for an element: its ends, the current kink at z' = 0 and the
// point closest to the observer, where 1/R^alpha peaks.
std::vector<double> breaks(double half, double peak)
{
    std::vector<double> b{-half, 0.0, half};
    if (peak > -half && peak < half && peak != 0.0)
        b.push_back(peak);
    std::sort(b.begin(), b.end());
    return b;
}

numeric::QuadratureOptions quad_options(double rel_tol) { return {rel_tol, 0.0, 4000}; }

} // namespace

DipoleArraySpec DipoleArraySpec::make(int n, double element_length, double spacing, double wavelength,
                                      ExcitationPattern pattern, cplx i0)
{
    DipoleArraySpec s;
    s.n = n;
    s.element_length = element_length;
    s.spacing = spacing;
    s.wavelength = wavelength;
    if (n >= 1) {
        s.excitations.resize(static_cast<std::size_t>(n));
        for (int k = 1; k <= n; ++k)
            s.excitations[k - 1] = (pattern == ExcitationPattern::Alternating && k % 2 == 1) ? -i0 : i0;
    }
    s.validate();
    return s;
}

void DipoleArraySpec::validate() const
{
    if (n < 1)
        throw ParameterError("dipole array needs at least one element");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw ParameterError("wavelength must be positive");
    if (!(element_length > 0.0 && element_length < wavelength))
        throw ParameterError("element length must satisfy 0 < Ds < lambda");
    if (n > 1 && !(spacing > 0.0))
        throw ParameterError("element spacing must be positive");
    if (excitations.size() != static_cast<std::size_t>(n))
        throw ParameterError("one excitation per element is required");
}

double DipoleArraySpec::center(int index) const { return (index - 0.5 * (n + 1)) * spacing; }

cplx current_phasor(const DipoleArraySpec& spec, int n, double z_prime)
{
    if (n < 1 || n > spec.n)
        throw ParameterError("element index out of range");
    const double u = std::abs(z_prime - spec.center(n));
    const double half = 0.5 * spec.element_length;
    if (u > half)
        return 0.0;
    return spec.excitations[n - 1] * std::sin(kTwoPi / spec.wavelength * (half - u));
}

double current_distribution(const DipoleArraySpec& spec, int n, double z_prime)
{
    return current_phasor(spec, n, z_prime).real();
}

DipoleIntegrals dipole_integrals(double ds_norm, double zn_norm, double r_norm, double rel_tol)
{
    if (!(r_norm > 0.0))
        throw SingularityError("dipole integrals need r > 0");
    if (!(ds_norm >= 0.0))
        throw ParameterError("element length must be non-negative");
    DipoleIntegrals out{};
    if (ds_norm == 0.0)
        return out;

    const double half = 0.5 * ds_norm;
    const double r2 = r_norm * r_norm;
    auto f = [&](double z) {
        const double u = z + zn_norm;
        const double R2 = r2 + u * u;
        const double R = std::sqrt(R2);
        const double inv = 1.0 / R;
        const double s = std::sin(kTwoPi * (half - std::abs(z)));
        const cplx f2 = std::polar(s / R2, -kTwoPi * R);
        const cplx f3 = f2 * inv;
        const cplx f4 = f3 * inv;
        const cplx f5 = f4 * inv;
        return std::array<cplx, 7>{f2, f3, f4, f5, z * f3, z * f4, z * f5};
    };
    const auto b = breaks(half, -zn_norm);
    const auto res = numeric::integrate_components<7>(f, b, quad_options(rel_tol));
    for (int i = 0; i < 4; ++i)
        out.f[i] = res.value[i];
    for (int i = 0; i < 3; ++i)
        out.g[i] = res.value[4 + i];
    return out;
}

cplx f_tilde(int alpha, double ds_norm, double zn_norm, double r_norm, double rel_tol)
{
    check_alpha(alpha, 2);
    if (!(r_norm > 0.0))
        throw SingularityError("f_tilde needs r > 0");
    const double half = 0.5 * ds_norm;
    auto f = [&](double z) {
        const double R = std::hypot(r_norm, z + zn_norm);
        return std::polar(std::sin(kTwoPi * (half - std::abs(z))) / std::pow(R, alpha), -kTwoPi * R);
    };
    const auto b = breaks(half, -zn_norm);
    return numeric::integrate_complex(f, -half, half, quad_options(rel_tol), std::span(b).subspan(1, b.size() - 2));
}

cplx g_tilde(int alpha, double ds_norm, double zn_norm, double r_norm, double rel_tol)
{
    check_alpha(alpha, 2);
    if (!(r_norm > 0.0))
        throw SingularityError("g_tilde needs r > 0");
    const double half = 0.5 * ds_norm;
    auto f = [&](double z) {
        const double R = std::hypot(r_norm, z + zn_norm);
        return z * std::polar(std::sin(kTwoPi * (half - std::abs(z))) / std::pow(R, alpha), -kTwoPi * R);
    };
    const auto b = breaks(half, -zn_norm);
    return numeric::integrate_complex(f, -half, half, quad_options(rel_tol), std::span(b).subspan(1, b.size() - 2));
}

cplx f_physical(int alpha, double ds, double zn, double r, double wavelength, double rel_tol)
{
    check_alpha(alpha, 2);
    if (!(r > 0.0) || !(wavelength > 0.0))
        throw ParameterError("f_physical needs r > 0 and lambda > 0");
    const double k = kTwoPi / wavelength;
    const double half = 0.5 * ds;
    auto f = [&](double z) {
        const double R = std::sqrt(r * r + (z + zn) * (z + zn));
        return std::sin(k * (half - std::abs(z))) * std::exp(-kJ * (k * R)) / std::pow(R, alpha);
    };
    const double kink[] = {0.0};
    return numeric::integrate_complex(f, -half, half, quad_options(rel_tol), kink);
}

cplx g_physical(int alpha, double ds, double zn, double r, double wavelength, double rel_tol)
{
    check_alpha(alpha, 2);
    if (!(r > 0.0) || !(wavelength > 0.0))
        throw ParameterError("g_physical needs r > 0 and lambda > 0");
    const double k = kTwoPi / wavelength;
    const double half = 0.5 * ds;
    auto f = [&](double z) {
        const double R = std::sqrt(r * r + (z + zn) * (z + zn));
        return z * std::sin(k * (half - std::abs(z))) * std::exp(-kJ * (k * R)) / std::pow(R, alpha);
    };
    const double kink[] = {0.0};
    return numeric::integrate_complex(f, -half, half, quad_options(rel_tol), kink);
}

PlaneFields fields_on_plane(const DipoleArraySpec& spec, double r, double rel_tol)
{
    spec.validate();
    if (!(r > 0.0))
        throw SingularityError("fields are singular at r = 0");

    const double lambda = spec.wavelength;
    const double k = kTwoPi / lambda;
    const double eta = kFreeSpaceImpedance;
    const double rt = r / lambda;
    const double rt2 = rt * rt;
    const double inv2pi = 1.0 / kTwoPi;

    PlaneFields out;
    out.per_element.reserve(static_cast<std::size_t>(spec.n));
    for (int n = 1; n <= spec.n; ++n) {
        const cplx i0 = spec.excitations[n - 1];
        const DipoleIntegrals I = dipole_integrals(spec.element_length / lambda, spec.center(n) / lambda, rt, rel_tol);
        const cplx& F2 = I.f[0];
        const cplx& F3 = I.f[1];
        const cplx& F4 = I.f[2];
        const cplx& F5 = I.f[3];
        const cplx& G3 = I.g[0];
        const cplx& G4 = I.g[1];
        const cplx& G5 = I.g[2];

        ComplexFieldSample s;
        s.h_phi = (kJ * k * i0 * rt / (4.0 * kPi)) * (F2 - kJ * inv2pi * F3);
        s.e_r = (kJ * eta * k * i0 * rt / (4.0 * kPi)) * (-G3 + 3.0 * kJ * inv2pi * G4 + 3.0 * inv2pi * inv2pi * G5);
        s.e_z = (eta * k * i0 / (8.0 * kPi * kPi)) *
                (2.0 * F2 - 2.0 * kJ * (inv2pi + kPi * rt2) * F3 - 3.0 * rt2 * F4 + 3.0 * kJ * inv2pi * rt2 * F5);
        out.total.h_phi += s.h_phi;
        out.total.e_r += s.e_r;
        out.total.e_z += s.e_z;
        out.per_element.push_back(s);
    }
    return out;
}

ComplexPowerDensity poynting(const DipoleArraySpec& spec, double r, double rel_tol)
{
    const ComplexFieldSample t = fields_on_plane(spec, r, rel_tol).total;
    ComplexPowerDensity p;
    const cplx h_conj = std::conj(t.h_phi);
    p.p_z = 0.5 * t.e_r * h_conj;
    p.p_r = -0.5 * t.e_z * h_conj;
    p.active_mag = std::hypot(p.p_z.real(), p.p_r.real());
    p.reactive_mag = std::hypot(p.p_z.imag(), p.p_r.imag());
    return p;
}

std::vector<PowerSample> power_curve(const DipoleArraySpec& spec, double r_min, double r_max, int points,
                                     double rel_tol)
{
    if (!(r_min > 0.0) || !(r_max > r_min) || points < 2)
        throw ParameterError("power curve needs 0 < r_min < r_max and at least two points");
    std::vector<PowerSample> out(static_cast<std::size_t>(points));
    parallel_for(out.size(), [&](std::size_t i) {
        const double r = r_min * std::pow(r_max / r_min, static_cast<double>(i) / (points - 1));
        const ComplexPowerDensity p = poynting(spec, r, rel_tol);
        out[i] = {r, p.active_mag, p.reactive_mag};
    });
    return out;
}

NonRadiatingResult nonradiating_distance(const DipoleArraySpec& spec, const NonRadiatingOptions& opt)
{
    spec.validate();
    const double lambda = spec.wavelength;
    const auto curve = power_curve(spec, opt.r_min_wl * lambda, opt.r_max_wl * lambda, opt.scan_points, opt.rel_tol);

    auto excess = [](const PowerSample& s) { return s.reactive_mag - s.active_mag; };
    for (std::size_t i = curve.size() - 1; i-- > 0;) {
        const double a = excess(curve[i]);
        const double b = excess(curve[i + 1]);
        if ((a < 0.0) == (b < 0.0) && a != 0.0 && b != 0.0)
            continue;
        auto diff = [&](double r) {
            const ComplexPowerDensity p = poynting(spec, r, opt.rel_tol);
            return p.reactive_mag - p.active_mag;
        };
        const double d = numeric::bisect(diff, curve[i].r, curve[i + 1].r, opt.tol_wl * lambda, 200);
        return {d, false};
    }
    return {0.0, true};
}

} // namespace nfkit
