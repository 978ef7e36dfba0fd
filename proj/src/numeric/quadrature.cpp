#include "nfkit/numeric/quadrature.hpp"

namespace nfkit::numeric {

namespace {

std::vector<double> edges(double a, double b, std::span<const double> interior)
{
    std::vector<double> pts{a};
    for (double x : interior)
        if (x > a && x < b)
            pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    return pts;
}

} // namespace

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double a, double b,
                                       const QuadratureOptions& opt, std::span<const double> interior)
{
    if (a == b)
        return 0.0;
    if (a > b)
        return -integrate_complex(f, b, a, opt, interior);
    auto wrapped = [&f](double x) { return std::array<std::complex<double>, 1>{f(x)}; };
    const auto pts = edges(a, b, interior);
    return integrate_components<1>(wrapped, pts, opt).value[0];
}

double integrate_real(const std::function<double(double)>& f, double a, double b, const QuadratureOptions& opt,
                      std::span<const double> interior)
{
    return integrate_complex([&f](double x) { return std::complex<double>(f(x), 0.0); }, a, b, opt, interior).real();
}

} // namespace nfkit::numeric
