#include <doctest.h>

#include <cmath>
#include <vector>

#include "nfkit/constants.hpp"
#include "nfkit/errors.hpp"
#include "nfkit/numeric/quadrature.hpp"
#include "nfkit/numeric/roots.hpp"
#include "nfkit/parallel.hpp"

using namespace nfkit;
using namespace nfkit::numeric;

TEST_CASE("Kronrod rule is exact through degree 23, Gauss through 13")
{
    auto kronrod = [](int deg) {
        double s = detail::kWgk[7] * std::pow(0.0, deg);
        for (int j = 0; j < 7; ++j)
            s += detail::kWgk[j] * (std::pow(detail::kXgk[j], deg) + std::pow(-detail::kXgk[j], deg));
        return s;
    };
    auto gauss = [](int deg) {
        double s = detail::kWg[3] * std::pow(0.0, deg);
        for (int j = 0; j < 3; ++j)
            s += detail::kWg[j] * (std::pow(detail::kXgk[2 * j + 1], deg) + std::pow(-detail::kXgk[2 * j + 1], deg));
        return s;
    };
    for (int deg = 0; deg <= 24; deg += 2) {
        const double exact = 2.0 / (deg + 1);
        if (deg <= 23)
            CHECK(std::abs(kronrod(deg) - exact) < 1e-14);
        else
            CHECK(std::abs(kronrod(deg) - exact) > 1e-10);
        if (deg <= 13)
            CHECK(std::abs(gauss(deg) - exact) < 1e-14);
        else
            CHECK(std::abs(gauss(deg) - exact) > 1e-10);
    }
    // the panel routine uses the same rule
    auto f = [](double x) { return std::array<std::complex<double>, 1>{std::pow(x, 22) + x}; };
    const auto p = detail::gk15<1>(f, -1.0, 1.0);
    CHECK(p.value[0].real() == doctest::Approx(2.0 / 23).epsilon(1e-14));
}

TEST_CASE("adaptive integrals with known values")
{
    CHECK(integrate_real([](double x) { return std::sin(x); }, 0.0, kPi) == doctest::Approx(2.0).epsilon(1e-12));
    const auto c = integrate_complex([](double x) { return std::exp(std::complex<double>(0.0, 40.0 * x)); }, 0.0, 1.0);
    const std::complex<double> want = (std::exp(std::complex<double>(0.0, 40.0)) - 1.0) / std::complex<double>(0.0, 40.0);
    CHECK(std::abs(c - want) < 1e-11);
    const double kink[] = {0.3};
    CHECK(integrate_real([](double x) { return std::abs(x - 0.3); }, -1.0, 1.0, {}, kink) ==
          doctest::Approx(0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7).epsilon(1e-13));
    // integrable endpoint singularity, reached by bisection
    CHECK(integrate_real([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-8, 0.0, 4000}) ==
          doctest::Approx(2.0).epsilon(1e-7));
    // reversed limits
    CHECK(integrate_real([](double x) { return x; }, 1.0, 0.0) == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("components converge together")
{
    const double br[] = {0.0, 1.0, 2.0};
    auto f = [](double x) {
        return std::array<std::complex<double>, 2>{std::exp(x), std::complex<double>(0.0, std::cos(x))};
    };
    const auto r = integrate_components<2>(f, br);
    CHECK(r.value[0].real() == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-12));
    CHECK(r.value[1].imag() == doctest::Approx(std::sin(2.0)).epsilon(1e-12));
    CHECK(r.intervals >= 2);
}

TEST_CASE("budget exhaustion is reported")
{
    QuadratureOptions o;
    o.max_intervals = 3;
    o.rel_tol = 1e-14;
    CHECK_THROWS_AS(integrate_real([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, o), NumericError);
    const double one[] = {0.0};
    CHECK_THROWS_AS(integrate_components<1>([](double) { return std::array<std::complex<double>, 1>{}; }, one),
                    ParameterError);
}

TEST_CASE("bisection")
{
    const double r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
    CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(bisect([](double x) { return x - 1.0; }, 1.0, 3.0, 1e-12) == 1.0);
    CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12), NumericError);
}

TEST_CASE("parallel_for visits every index once and rethrows")
{
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits)
        CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(50, [](std::size_t i) {
                        if (i == 17)
                            throw NumericError("boom");
                    }),
                    NumericError);
    // nested regions run inline
    std::vector<int> inner(64, 0);
    parallel_for(8, [&](std::size_t i) { parallel_for(8, [&](std::size_t j) { inner[i * 8 + j] = 1; }); });
    for (int h : inner)
        CHECK(h == 1);
    CHECK(thread_count() >= 1);
}
