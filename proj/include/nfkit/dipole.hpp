#pragma once

#include <array>
#include <complex>
#include <vector>

namespace nfkit {

using cplx = std::complex<double>;

enum class ExcitationPattern { InPhase, Alternating };

// N center-fed thin dipoles along z, centers z_n = (n - (N+1)/2) delta, n = 1..N.
struct DipoleArraySpec {
    int n = 1;
    double element_length = 0.0; // D^s, meters
    double spacing = 0.0;        // meters
    double wavelength = 0.0;     // meters
    std::vector<cplx> excitations; // I_0 per element, amperes

    // Validates 0 < D^s < lambda, spacing > 0 (when N > 1), lambda > 0.
    static DipoleArraySpec make(int n, double element_length, double spacing, double wavelength,
                                ExcitationPattern pattern = ExcitationPattern::InPhase, cplx i0 = 1.0);

    double center(int index) const; // index is 1-based
    void validate() const;
};

// I_0^{(n)} sin(k (D^s/2 - |z' - z_n|)); zero off the element. n is 1-based.
double current_distribution(const DipoleArraySpec& spec, int n, double z_prime);
cplx current_phasor(const DipoleArraySpec& spec, int n, double z_prime);

// Wavelength-normalized integrals (all lengths in units of lambda):
// F~_a = int sin(2pi(Ds/2 - |z|)) e^{-j2pi R} / R^a dz,   G~_a = same with an extra factor z,
// R^2 = r^2 + (z + z_n)^2, z over [-Ds/2, Ds/2]. alpha in {2, 3, 4, 5}.
cplx f_tilde(int alpha, double ds_norm, double zn_norm, double r_norm, double rel_tol = 1e-9);
cplx g_tilde(int alpha, double ds_norm, double zn_norm, double r_norm, double rel_tol = 1e-9);

// The same integrals in physical units for wavelength lambda (k = 2pi/lambda):
// F_a = lambda^{1-a} F~_a, G_a = lambda^{2-a} G~_a.
cplx f_physical(int alpha, double ds, double zn, double r, double wavelength, double rel_tol = 1e-9);
cplx g_physical(int alpha, double ds, double zn, double r, double wavelength, double rel_tol = 1e-9);

// F~_2..F~_5 and G~_3..G~_5 from one adaptive pass.
struct DipoleIntegrals {
    std::array<cplx, 4> f; // alpha = 2..5
    std::array<cplx, 3> g; // alpha = 3..5
};
DipoleIntegrals dipole_integrals(double ds_norm, double zn_norm, double r_norm, double rel_tol = 1e-9);

struct ComplexFieldSample {
    cplx h_phi;
    cplx e_r;
    cplx e_z;
};

struct PlaneFields {
    ComplexFieldSample total;
    std::vector<ComplexFieldSample> per_element;
};

// Fields at cylindrical radius r on the z = 0 plane. SingularityError at r <= 0.
PlaneFields fields_on_plane(const DipoleArraySpec& spec, double r, double rel_tol = 1e-9);

struct ComplexPowerDensity {
    cplx p_z;
    cplx p_r;
    double active_mag = 0.0;
    double reactive_mag = 0.0;
};

// P = E x H* / 2 with the strict cross-product sign: P_z = E_r H*/2, P_r = -E_z H*/2.
ComplexPowerDensity poynting(const DipoleArraySpec& spec, double r, double rel_tol = 1e-9);

struct NonRadiatingResult {
    double distance = 0.0;        // meters, 0 when no crossing
    bool fully_radiative = false; // no active/reactive crossing in the scan window
};

struct NonRadiatingOptions {
    double r_min_wl = 0.01;
    double r_max_wl = 1.0;
    int scan_points = 500;
    double tol_wl = 1e-6;
    double rel_tol = 1e-9;
};

// Largest r where |reactive| = |active|, from the last sign change of the scan.
NonRadiatingResult nonradiating_distance(const DipoleArraySpec& spec, const NonRadiatingOptions& options = {});

struct PowerSample {
    double r = 0.0;
    double active_mag = 0.0;
    double reactive_mag = 0.0;
};

// Active/reactive magnitudes on log-spaced radii (for plotting).
std::vector<PowerSample> power_curve(const DipoleArraySpec& spec, double r_min, double r_max, int points,
                                     double rel_tol = 1e-9);

} // namespace nfkit
