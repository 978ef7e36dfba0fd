#pragma once

#include <cmath>

#include "nfkit/errors.hpp"

namespace nfkit::numeric {

// Bisection on [lo, hi] for a sign change of f. Stops when the bracket is
// narrower than x_tol, when the midpoint no longer moves (machine precision),
// or after max_iter halvings. Returns the bracket midpoint.
template <class F>
double bisect(F&& f, double lo, double hi, double x_tol, int max_iter = 200)
{
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0)
        return lo;
    if (f_hi == 0.0)
        return hi;
    if ((f_lo < 0.0) == (f_hi < 0.0) || std::isnan(f_lo) || std::isnan(f_hi))
        throw NumericError("bisection bracket does not contain a sign change");

    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= x_tol || mid == lo || mid == hi)
            return mid;
        const double f_mid = f(mid);
        if (f_mid == 0.0)
            return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace nfkit::numeric
