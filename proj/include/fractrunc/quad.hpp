#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace fractrunc::quad {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    long long max_evals = 10'000'000;

    // Both tolerances divided by `factor`; the evaluation budget is kept.
    Tolerance tightened(double factor) const { return {abs_tol / factor, rel_tol / factor, max_evals}; }
};

struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long long n_evals = 0;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        abs_error_estimate += o.abs_error_estimate;
        n_evals += o.n_evals;
        return *this;
    }
    QuadResult& operator*=(double c) {
        value *= c;
        abs_error_estimate *= std::abs(c);
        return *this;
    }
};

inline QuadResult operator+(QuadResult a, const QuadResult& b) { return a += b; }
inline QuadResult operator*(double c, QuadResult a) { return a *= c; }

// An algebraic singularity f(τ) ~ |τ - location|^exponent.  `local`, when set,
// evaluates f(location + h) from the signed offset h directly, which avoids the
// cancellation in forming location + h - location for tiny h.
struct SingularPoint {
    double location = 0.0;
    double exponent = 0.0;
    std::function<double(double)> local;
};

// A point where only the symmetric principal value exists.  `paired(h)` may
// return f(c+h)+f(c-h) in a cancellation-free form; `fold_exponent` describes
// the behaviour of that sum as h -> 0.
struct PvPoint {
    double location = 0.0;
    std::function<double(double)> paired;
    double fold_exponent = 0.0;
};

struct Integrand {
    std::function<double(double)> eval;
    std::vector<SingularPoint> singular_points;
    std::vector<PvPoint> pv_points;
    double tail_decay = 0.0;
    // Optional rigorous bound on |∫_T^∞ f| supplied by the caller.
    std::function<double(double)> tail_bound;
};

QuadResult integrate(const Integrand& f, double a, double b, const Tolerance& tol = {});

QuadResult integrate_pv(const Integrand& f, double c, double halfwidth, const Tolerance& tol = {});

}  // namespace fractrunc::quad
