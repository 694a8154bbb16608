#include "fractrunc/roots.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fractrunc/errors.hpp"

namespace fractrunc {

RootResult bracketed_root(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi,
                          const RootTolerance& tol) {
    if (flo == 0.0) return {lo, 0.0, {lo, lo}, 0};
    if (fhi == 0.0) return {hi, 0.0, {hi, hi}, 0};
    if ((flo > 0) == (fhi > 0)) throw BracketFailure("root finder called without a sign change");

    double a = lo, b = hi, fa = flo, fb = fhi;
    double c = a, fc = fa, d = b - a, e = d;
    int it = 0;
    for (; it < tol.max_iterations; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double half = 0.5 * (c - b);
        const double xtol = 0.5 * tol.width;
        if (std::abs(fb) <= tol.residual || std::abs(half) <= xtol) break;
        if (std::abs(e) >= xtol && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double sr = fb / fa;
            if (a == c) {
                p = 2.0 * half * sr;
                q = 1.0 - sr;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = sr * (2.0 * half * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (sr - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * half * q - std::abs(xtol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > xtol) ? d : (half > 0 ? xtol : -xtol);
        fb = f(b);
    }
    // The sign change sits between b and c; widen by half the width tolerance
    // so the reported estimate is strictly interior.
    const double pad = 0.5 * tol.width;
    return {b, fb, {std::min(b, c) - pad, std::max(b, c) + pad}, it};
}

}  // namespace fractrunc
