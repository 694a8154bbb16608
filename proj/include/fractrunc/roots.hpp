#pragma once

#include <functional>
#include <utility>

namespace fractrunc {

struct RootResult {
    double root = 0.0;
    double residual = 0.0;
    std::pair<double, double> bracket{0.0, 0.0};
    int iterations = 0;
};

struct RootTolerance {
    double residual = 1e-9;
    double width = 1e-10;
    int max_iterations = 200;
};

// Brent-Dekker iteration (inverse quadratic / secant steps guarded by
// bisection) on a bracket [lo, hi] with f(lo)·f(hi) < 0.  The returned bracket
// always contains the root.
RootResult bracketed_root(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi,
                          const RootTolerance& tol = {});

}  // namespace fractrunc
