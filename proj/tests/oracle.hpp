#pragma once

// Reference values for the test suites.  Nothing here touches the library:
// closed forms come from Gamma-function identities and the numerical fallback
// is a double-exponential rule in long double, a different method from the
// adaptive Gauss-Kronrod engine under test.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using LD = long double;
using Fn = std::function<LD(LD)>;

inline constexpr LD pi = 3.141592653589793238462643383279502884L;

// C_s of the one-dimensional fractional Laplacian.
inline double Cs(double s) {
    return std::pow(4.0, s) * s * std::tgamma(0.5 + s) / (std::sqrt(M_PI) * std::tgamma(1.0 - s));
}

// PV ∫_R (|1+τ|^λ - 1)|τ|^{-1-2s} dτ, read off the Riesz formula
// (-Δ)^s|x|^λ = 2^{2s} Γ((1+λ)/2) Γ(s-λ/2) / (Γ(-λ/2) Γ((1+λ)/2-s)) |x|^{λ-2s}.
inline double shifted_power_pv(double lambda, double s) {
    if (lambda == 0.0) return 0.0;
    const double frac = std::pow(4.0, s) * std::tgamma(0.5 * (1.0 + lambda)) * std::tgamma(s - 0.5 * lambda) /
                        (std::tgamma(-0.5 * lambda) * std::tgamma(0.5 * (1.0 + lambda) - s));
    return -frac / Cs(s);
}

// ∫_0^∞ ((1+τ²)^{-γ/2} - 1) τ^{-1-2s} dτ, doubled.  With u = τ² this is a
// Mellin transform of (1+u)^{-λ} - 1 continued to -1 < Re < 0.
inline double c_perp(double gamma, double s) {
    const double lam = 0.5 * gamma;
    return std::tgamma(-s) * std::tgamma(lam + s) / std::tgamma(lam);
}

// C_s c_{s,μ} = Γ(1+μ) sin(π(μ-s)) / (Γ(1+μ-2s) sin(π(2s-μ))).
inline double c_s_mu(double mu, double s) {
    return std::tgamma(1.0 + mu) * std::sin(M_PI * (mu - s)) /
           (std::tgamma(1.0 + mu - 2.0 * s) * std::sin(M_PI * (2.0 * s - mu))) / Cs(s);
}

// Γ(s)Γ(1-s), the raw second-difference integral of the unit bump (negated).
inline double bump_identity(double s) { return M_PI / std::sin(M_PI * s); }

// Tanh-sinh on (a, b).  f receives the abscissa together with its distance to
// the nearer endpoint so integrands singular there can avoid cancellation.
inline LD tanh_sinh(const std::function<LD(LD x, LD da, LD db)>& f, LD a, LD b, LD rel = 1e-17L) {
    const LD c = 0.5L * (a + b), r = 0.5L * (b - a);
    LD h = 0.5L, total = 0.0L, prev = 0.0L;
    auto node = [&](LD t) -> LD {
        const LD u = 0.5L * pi * std::sinh(t);
        const LD ch = std::cosh(u);
        const LD w = 0.5L * pi * std::cosh(t) / (ch * ch);
        const LD comp = 1.0L / (std::exp(2.0L * u) + 1.0L);  // (1 - tanh u)/2 without cancellation
        const LD compm = 1.0L / (std::exp(-2.0L * u) + 1.0L);
        const LD da = 2.0L * r * compm, db = 2.0L * r * comp;
        if (da <= 0.0L || db <= 0.0L) return 0.0L;
        const LD x = u < 0 ? a + da : b - db;
        return r * w * f(x, da, db);
    };
    total = node(0.0L);
    for (int k = 1;; ++k) {
        const LD t = k * h;
        const LD add = node(t) + node(-t);
        total += add;
        if (t > 6.5L) break;
    }
    prev = total * h;
    for (int level = 0; level < 12; ++level) {
        h *= 0.5L;
        LD add = 0.0L;
        for (LD t = h; t < 6.5L; t += 2.0L * h) add += node(t) + node(-t);
        total += add;
        const LD est = total * h;
        if (level > 2 && std::fabs(est - prev) <= rel * std::fabs(est) + 1e-30L) return est;
        prev = est;
    }
    return prev;
}

// Plain version when the integrand only needs x.
inline LD finite(const Fn& f, LD a, LD b) {
    return tanh_sinh([&](LD x, LD, LD) { return f(x); }, a, b);
}

// ∫_a^∞ via τ = a + v/(1-v), v in (0,1).
inline LD half_line(const Fn& f, LD a) {
    return tanh_sinh(
        [&](LD v, LD, LD dv) {
            const LD t = a + v / dv;
            return f(t) / (dv * dv);
        },
        0.0L, 1.0L);
}

// ∫_0^∞ F(τ) τ^{-1-2s} dτ for an even second difference F with
// F(τ) = c2 τ² + O(τ⁴).  The piece below δ is taken from the leading term;
// the remainder is split at `breaks` so kinks sit at panel ends.
inline double second_difference_integral(const Fn& F, double c2, double s, std::vector<double> breaks = {},
                                         double delta = 1e-6) {
    const LD q = 1.0L + 2.0L * s;
    auto g = [&](LD t) { return F(t) / std::pow(t, q); };
    LD sum = c2 * std::pow(static_cast<LD>(delta), 2.0L - 2.0L * s) / (2.0L - 2.0L * s);
    std::vector<LD> pts{static_cast<LD>(delta)};
    for (double b : breaks)
        if (b > delta) pts.push_back(b);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += finite(g, pts[i], pts[i + 1]);
    sum += half_line(g, pts.back());
    return static_cast<double>(sum);
}

// Integral along a line through a point at unit distance from the origin, for
// the radial power |y|^{-γ}; a = cos of the angle between the line and x̂.
inline double radial_power_directional(double gamma, double s, double a) {
    const LD lam = 0.5L * gamma, A = a;
    Fn F = [=](LD t) {
        const LD up = std::expm1(-lam * std::log1p(t * t + 2 * A * t));
        const LD dn = std::expm1(-lam * std::log1p(t * t - 2 * A * t));
        return up + dn;
    };
    const double c2 = static_cast<double>(-2 * lam + 4 * lam * (lam + 1) * A * A);
    std::vector<double> breaks{a > 1e-3 ? a : 0.5, 2.0, 8.0};
    return second_difference_integral(F, c2, s, breaks);
}

}  // namespace oracle
