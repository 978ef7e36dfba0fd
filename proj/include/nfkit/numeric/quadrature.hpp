#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "nfkit/errors.hpp"

namespace nfkit::numeric {

struct QuadratureOptions {
    double rel_tol = 1e-9;
    double abs_tol = 0.0;
    int max_intervals = 4000;
};

template <std::size_t M>
struct QuadratureResult {
    std::array<std::complex<double>, M> value{};
    std::array<double, M> error{};
    int intervals = 0;
    int evaluations = 0;
};

namespace detail {

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t M>
struct Panel {
    double a;
    double b;
    std::array<std::complex<double>, M> value;
    std::array<double, M> error;
    std::array<double, M> resabs;
};

template <std::size_t M, class F>
Panel<M> gk15(F& f, double a, double b)
{
    using V = std::array<std::complex<double>, M>;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<V, 15> fv;
    fv[0] = f(center);
    for (int j = 0; j < 7; ++j) {
        fv[1 + 2 * j] = f(center - half * kXgk[j]);
        fv[2 + 2 * j] = f(center + half * kXgk[j]);
    }

    Panel<M> p{a, b, {}, {}, {}};
    for (std::size_t c = 0; c < M; ++c) {
        std::complex<double> k = kWgk[7] * fv[0][c];
        std::complex<double> g = kWg[3] * fv[0][c];
        double abs_sum = kWgk[7] * std::abs(fv[0][c]);
        for (int j = 0; j < 7; ++j) {
            const std::complex<double> pair = fv[1 + 2 * j][c] + fv[2 + 2 * j][c];
            k += kWgk[j] * pair;
            abs_sum += kWgk[j] * (std::abs(fv[1 + 2 * j][c]) + std::abs(fv[2 + 2 * j][c]));
            if (j % 2 == 1)
                g += kWg[j / 2] * pair;
        }
        const std::complex<double> mean = 0.5 * k;
        double asc = kWgk[7] * std::abs(fv[0][c] - mean);
        for (int j = 0; j < 7; ++j)
            asc += kWgk[j] * (std::abs(fv[1 + 2 * j][c] - mean) + std::abs(fv[2 + 2 * j][c] - mean));

        const double resabs = abs_sum * std::abs(half);
        const double resasc = asc * std::abs(half);
        double err = std::abs((k - g) * half);
        if (resasc != 0.0 && err != 0.0)
            err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
            err = std::max(50.0 * eps * resabs, err);

        p.value[c] = k * half;
        p.error[c] = err;
        p.resabs[c] = resabs;
    }
    return p;
}

} // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) for an M-component complex integrand.
// `breaks` are sorted points that always become panel edges (kinks go here).
// Every component must meet max(abs_tol, rel_tol |I|); components that cancel
// to roundoff are accepted at the roundoff floor. Throws NumericError when the
// panel budget runs out.
template <std::size_t M, class F>
QuadratureResult<M> integrate_components(F&& f, std::span<const double> breaks, const QuadratureOptions& opt = {})
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (breaks.size() < 2)
        throw ParameterError("quadrature needs at least two break points");

    std::vector<detail::Panel<M>> panels;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (breaks[i + 1] != breaks[i])
            panels.push_back(detail::gk15<M>(f, breaks[i], breaks[i + 1]));

    QuadratureResult<M> out;
    if (panels.empty()) {
        out.intervals = 0;
        return out;
    }

    std::array<double, M> tol{};
    for (;;) {
        std::array<std::complex<double>, M> total{};
        std::array<double, M> err{};
        std::array<double, M> l1{};
        for (const auto& p : panels)
            for (std::size_t c = 0; c < M; ++c) {
                total[c] += p.value[c];
                err[c] += p.error[c];
                l1[c] += p.resabs[c];
            }

        bool done = true;
        for (std::size_t c = 0; c < M; ++c) {
            tol[c] = std::max({opt.abs_tol, opt.rel_tol * std::abs(total[c]), 100.0 * eps * l1[c],
                               std::numeric_limits<double>::min()});
            if (err[c] > tol[c])
                done = false;
        }
        if (done) {
            out.value = total;
            out.error = err;
            out.intervals = static_cast<int>(panels.size());
            out.evaluations = 15 * out.intervals;
            return out;
        }
        if (static_cast<int>(panels.size()) >= opt.max_intervals)
            throw NumericError("adaptive quadrature did not converge within the panel budget");

        std::size_t worst = 0;
        double worst_score = -1.0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            double score = 0.0;
            for (std::size_t c = 0; c < M; ++c)
                score = std::max(score, panels[i].error[c] / tol[c]);
            if (score > worst_score) {
                worst_score = score;
                worst = i;
            }
        }

        const double a = panels[worst].a;
        const double b = panels[worst].b;
        const double mid = 0.5 * (a + b);
        if (!(mid > a && mid < b))
            throw NumericError("adaptive quadrature panel collapsed to machine precision");
        panels[worst] = detail::gk15<M>(f, a, mid);
        panels.push_back(detail::gk15<M>(f, mid, b));
    }
}

// Scalar complex integral of f over [a, b], optional interior break points.
std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double a, double b,
                                       const QuadratureOptions& opt = {}, std::span<const double> interior = {});

double integrate_real(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opt = {},
                      std::span<const double> interior = {});

} // namespace nfkit::numeric
