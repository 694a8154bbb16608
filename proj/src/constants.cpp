#include "fractrunc/constants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fractrunc/errors.hpp"

namespace fractrunc {

using quad::Integrand;
using quad::QuadResult;
using quad::Tolerance;

namespace {

constexpr double pi = std::numbers::pi;

std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

// Σ_{n = n0, n0+step, ...} coef[n] x^{n+shift} / (n+shift), the termwise
// integral of a power series over (0, x).
QuadResult series_integral(const std::vector<double>& coef, double x, double shift, int n0, int step) {
    QuadResult r;
    double abs_sum = 0.0;
    double last = 0.0;
    int since_small = 0;
    for (std::size_t n = static_cast<std::size_t>(n0); n < coef.size(); n += static_cast<std::size_t>(step)) {
        const double p = static_cast<double>(n) + shift;
        const double term = coef[n] * std::pow(x, p) / p;
        r.value += term;
        abs_sum += std::abs(term);
        last = std::abs(term);
        ++r.n_evals;
        if (last <= 1e-18 * abs_sum) {
            if (++since_small == 3) break;
        } else {
            since_small = 0;
        }
    }
    r.abs_error_estimate = 4.0 * last + 4.0 * std::numeric_limits<double>::epsilon() * abs_sum;
    return r;
}

std::vector<double> binomials(double lambda, int nmax) {
    std::vector<double> b(static_cast<std::size_t>(nmax) + 1);
    b[0] = 1.0;
    for (int n = 1; n <= nmax; ++n) b[n] = b[n - 1] * (lambda - n + 1) / n;
    return b;
}

// Gegenbauer polynomials C_n^{(λ)}(x), n = 0..nmax, via the three-term
// recurrence.  Σ C_n^{(λ)}(x) t^n = (1 - 2xt + t²)^{-λ}.
std::vector<double> gegenbauer(double lambda, double x, int nmax) {
    std::vector<double> c(static_cast<std::size_t>(nmax) + 1);
    c[0] = 1.0;
    if (nmax >= 1) c[1] = 2.0 * lambda * x;
    for (int n = 2; n <= nmax; ++n) {
        c[n] = (2.0 * x * (n + lambda - 1.0) * c[n - 1] - (n + 2.0 * lambda - 2.0) * c[n - 2]) / n;
    }
    return c;
}

// ∫_T^∞ t^{e-p} (1 + σ/t)^e dt for σ = ±1 and T > 1, summed termwise in 1/t.
// This covers (1+t)^e t^{-p} and (t-1)^e t^{-p}, whose tails decay too slowly
// for truncation once p - e is close to 1.
QuadResult power_tail(double e, double p, double sigma, double T) {
    if (!(p - e > 1.0)) throw NonIntegrable("power tail needs p - e > 1");
    QuadResult r;
    double b = 1.0, sg = 1.0, abs_sum = 0.0, last = 0.0;
    for (int n = 0; n < 400; ++n) {
        if (n > 0) {
            b *= (e - n + 1) / n;
            sg *= sigma;
        }
        const double term = b * sg * std::pow(T, e - n - p + 1.0) / (n + p - e - 1.0);
        r.value += term;
        abs_sum += std::abs(term);
        last = std::abs(term);
        ++r.n_evals;
        if (n > 2 && last <= 1e-18 * abs_sum) break;
    }
    r.abs_error_estimate = 4.0 * last + 4.0 * std::numeric_limits<double>::epsilon() * abs_sum;
    return r;
}

QuadResult integral(const Integrand& f, double a, double b, const Tolerance& tol) { return quad::integrate(f, a, b, tol); }

Tolerance share(const Tolerance& tol, double parts) { return {tol.abs_tol / parts, tol.rel_tol, tol.max_evals}; }

}  // namespace

ProblemParams::ProblemParams(double s_, int N_, int k_) : s(s_), N(N_), k(k_) {
    require_order(s);
    require_dimension(N);
    if (k < 1 || k > N) throw DomainError("k must lie in {1..N}");
}

void require_order(double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0,1)");
}

void require_dimension(int N) {
    if (N < 2) throw DomainError("N must be at least 2");
}

double normalizing_constant(double s) {
    require_order(s);
    return std::pow(4.0, s) * s * std::tgamma(0.5 + s) / (std::sqrt(pi) * std::tgamma(1.0 - s));
}

double beta_1ms_s(double s) {
    require_order(s);
    return pi / std::sin(pi * s);
}

QuadResult shifted_power_pv(double lambda, double s, const Tolerance& tol) {
    require_order(s);
    if (!(lambda > -1.0 && lambda < 2.0 * s)) throw DomainError("exponent must lie in (-1, 2s)");
    if (lambda == 0.0) return {};
    const double q = 1.0 + 2.0 * s;
    const Tolerance t2 = share(tol, 2.0);
    constexpr int nmax = 600;

    // Fold around τ = 0 on (0, 1/2): (1+h)^λ + (1-h)^λ - 2 = 2 Σ_{n even} binom(λ,n) h^n.
    auto b = binomials(lambda, nmax);
    for (auto& c : b) c *= 2.0;
    QuadResult r = series_integral(b, 0.5, -2.0 * s, 2, 2);

    // τ ≥ 1/2 and τ ≤ -3/2 (as t = -τ).  The "-1" parts are done in closed form.
    Integrand right;
    right.eval = [=](double t) { return std::pow(1.0 + t, lambda) / std::pow(t, q); };
    r += integral(right, 0.5, 4.0, t2);
    r += power_tail(lambda, q, 1.0, 4.0);
    Integrand left;
    left.eval = [=](double t) { return std::pow(t - 1.0, lambda) / std::pow(t, q); };
    r += integral(left, 1.5, 4.0, t2);
    r += power_tail(lambda, q, -1.0, 4.0);

    // Around τ = -1, with σ = 1+τ ∈ (-1/2, 1/2) and k(σ) = (1-σ)^{-q}:
    // ∫ |σ|^λ (k(σ)+k(-σ)) dσ over (0,1/2), the even part of k expanded in σ.
    auto kb = binomials(-q, nmax);
    for (auto& c : kb) c *= 2.0;
    r += series_integral(kb, 0.5, 1.0 + lambda, 2, 2);
    r.value += 2.0 * std::pow(0.5, 1.0 + lambda) / (1.0 + lambda);

    // Collected closed-form pieces of the "-1" terms.
    r.value -= std::pow(4.0, s) / s;
    return r;
}

QuadResult hat_c_dec(double gamma, double s, const Tolerance& tol) {
    require_order(s);
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("gamma must lie in (0,1)");
    return shifted_power_pv(-gamma, s, tol);
}

QuadResult hat_c_gro(double gamma, double s, const Tolerance& tol) {
    require_order(s);
    if (!(s > 0.5)) throw DomainError("s must lie in (1/2,1)");
    if (!(gamma > 0.0 && gamma <= 2.0 * s - 1.0 + 1e-15)) throw DomainError("gamma must lie in (0, 2s-1]");
    QuadResult r = shifted_power_pv(gamma, s, tol);
    r.value = -r.value;
    return r;
}

QuadResult c_perp(double gamma, double s, const Tolerance& tol) {
    require_order(s);
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    const double q = 1.0 + 2.0 * s;
    const double lam = 0.5 * gamma;
    // (1+τ²)^{-λ} - 1 = Σ_{n≥1} binom(-λ,n) τ^{2n} on (0, τ0).
    const double t0 = std::min(0.5, 0.5 / (1.0 + lam));
    auto b = binomials(-lam, 600);
    std::vector<double> coef(2 * b.size());
    for (std::size_t n = 1; n < b.size(); ++n) coef[2 * n] = b[n];
    QuadResult r = series_integral(coef, t0, -2.0 * s, 2, 2);
    Integrand f;
    f.eval = [=](double t) { return std::pow(1.0 + t * t, -lam) / std::pow(t, q); };
    f.tail_decay = q + gamma;
    r += integral(f, t0, quad::infinity, tol);
    r.value -= std::pow(t0, -2.0 * s) / (2.0 * s);
    r *= 2.0;
    return r;
}

QuadResult c_k_fn(double gamma, double s, int k, const Tolerance& tol) {
    if (k < 1) throw DomainError("k must be at least 1");
    QuadResult r = hat_c_dec(gamma, s, share(tol, 2.0));
    if (k > 1) r += static_cast<double>(k - 1) * c_perp(gamma, s, share(tol, 2.0 * (k - 1)));
    return r;
}

QuadResult c_iso(double gamma, double s, int N, const Tolerance& tol) {
    require_order(s);
    require_dimension(N);
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    const double q = 1.0 + 2.0 * s;
    const double lam = 0.5 * gamma;
    const double a = 1.0 / std::sqrt(static_cast<double>(N));

    const double t0 = std::min(0.5, 0.5 / (1.0 + lam));
    auto g = gegenbauer(lam, a, 800);
    for (auto& c : g) c *= 2.0;
    QuadResult r = series_integral(g, t0, -2.0 * s, 2, 2);

    const double B = 8.0;
    Integrand mid;
    mid.eval = [=](double t) {
        const double u = std::expm1(-lam * std::log1p(t * t + 2.0 * a * t));
        const double v = std::expm1(-lam * std::log1p(t * t - 2.0 * a * t));
        return (u + v) / std::pow(t, q);
    };
    if (a > t0) mid.singular_points.push_back({a, 0.0, {}});
    r += integral(mid, t0, B, share(tol, 2.0));

    Integrand far;
    far.eval = [=](double t) {
        return (std::pow(1.0 + t * t + 2.0 * a * t, -lam) + std::pow(1.0 + t * t - 2.0 * a * t, -lam)) / std::pow(t, q);
    };
    far.tail_decay = q + gamma;
    r += integral(far, B, quad::infinity, share(tol, 2.0));
    r.value -= 2.0 * std::pow(B, -2.0 * s) / (2.0 * s);
    return r;
}

QuadResult c_n_plus(double gamma, double s, int N, const Tolerance& tol) {
    const double Nd = static_cast<double>(N);
    QuadResult r = Nd * c_iso(gamma, s, N, share(tol, 2.0 * Nd));
    const double q = 1.0 + 2.0 * s;
    const double lam = 0.5 * gamma;
    const double a = 1.0 / std::sqrt(Nd);
    Integrand f;
    f.eval = [=](double t) { return std::pow(1.0 + t * t - 2.0 * a * t, -lam) / std::pow(t, q); };
    f.tail_decay = q + gamma;
    QuadResult tail = integral(f, std::sqrt(Nd), quad::infinity, share(tol, 2.0));
    r.value -= tail.value;
    r.abs_error_estimate += tail.abs_error_estimate;
    r.n_evals += tail.n_evals;
    return r;
}

QuadResult c_s_mu(double mu, double s, CsMuForm form, const Tolerance& tol) {
    require_order(s);
    if (!(mu > 0.0 && mu < 2.0 * s)) throw DomainError("mu must lie in (0, 2s)");
    const double q = 1.0 + 2.0 * s;
    const Tolerance t2 = share(tol, 2.0);
    constexpr int nmax = 600;
    if (form == CsMuForm::primary) {
        auto b = binomials(mu, nmax);
        for (auto& c : b) c *= 2.0;
        QuadResult r = series_integral(b, 0.5, -2.0 * s, 2, 2);
        Integrand mid;
        mid.eval = [=](double t) { return (std::pow(1.0 + t, mu) + std::pow(1.0 - t, mu) - 2.0) / std::pow(t, q); };
        // Offset from τ = 1 given directly so (1-τ)^μ is exact near the kink.
        mid.singular_points.push_back(
            {1.0, mu, [=](double h) { return (std::pow(2.0 + h, mu) + std::pow(-h, mu) - 2.0) / std::pow(1.0 + h, q); }});
        r += integral(mid, 0.5, 1.0, t2);
        Integrand far;
        far.eval = [=](double t) { return std::pow(1.0 + t, mu) / std::pow(t, q); };
        r += integral(far, 1.0, 4.0, t2);
        r += power_tail(mu, q, 1.0, 4.0);
        r.value -= 1.0 / s;
        return r;
    }
    const double e1 = mu - 1.0, e2 = 2.0 * s - mu - 1.0;
    if (e1 == e2) return {};
    auto b1 = binomials(e1, nmax), b2 = binomials(e2, nmax);
    std::vector<double> coef(b1.size());
    for (std::size_t n = 1; n < coef.size(); ++n) coef[n] = b1[n] - b2[n];
    QuadResult r = series_integral(coef, 0.5, 1.0 - 2.0 * s, 1, 1);
    Integrand f;
    f.eval = [=](double t) { return (std::pow(1.0 + t, e1) - std::pow(1.0 + t, e2)) / std::pow(t, 2.0 * s); };
    r += integral(f, 0.5, 4.0, t2);
    r += power_tail(e1, 2.0 * s, 1.0, 4.0);
    QuadResult minus = power_tail(e2, 2.0 * s, 1.0, 4.0);
    r.value -= minus.value;
    r.abs_error_estimate += minus.abs_error_estimate;
    r *= mu / (2.0 * s);
    return r;
}

namespace {

// f evaluated through the quadrature; the sign is trusted only when the value
// clears its own error bar.
struct Probe {
    double x;
    double value;
    bool resolved;
};

template <class F>
Probe probe(F&& f, double x) {
    const QuadResult r = f(x);
    return {x, r.value, std::abs(r.value) > r.abs_error_estimate};
}

template <class F>
RootResult refine(F&& f, const Probe& lo, const Probe& hi, const RootTolerance& tol) {
    auto scalar = [&](double x) { return f(x).value; };
    return bracketed_root(scalar, lo.x, hi.x, lo.value, hi.value, tol);
}

}  // namespace

std::optional<RootResult> find_gamma_bar(int k, double s, const RootOptions& opt) {
    require_order(s);
    if (k < 1) throw DomainError("k must be at least 1");
    auto f = [&](double g) { return c_k_fn(g, s, k, opt.quad); };
    std::vector<double> grid = {1e-6, 1e-4, 1e-3, 5e-3};
    for (int i = 1; i <= 99; ++i) grid.push_back(0.01 * i);
    grid.push_back(0.995);
    grid.push_back(0.999);
    grid.push_back(1.0 - 1e-6);

    std::optional<Probe> prev;
    for (double g : grid) {
        const Probe p = probe(f, g);
        if (!p.resolved) continue;
        if (prev && (prev->value < 0) != (p.value < 0)) return refine(f, *prev, p, opt.root);
        prev = p;
    }
    return std::nullopt;
}

RootResult find_gamma_tilde(int N, double s, const RootOptions& opt) {
    require_order(s);
    require_dimension(N);
    auto f = [&](double g) { return c_iso(g, s, N, opt.quad); };
    Probe lo = probe(f, 1e-3);
    while (!(lo.resolved && lo.value < 0)) {
        if (lo.x < 1e-9) throw BracketFailure("c_iso is not negative near 0; quadrature defect");
        lo = probe(f, lo.x / 10.0);
    }
    for (double g = 1.0; g <= 1024.0; g *= 2.0) {
        const Probe hi = probe(f, g);
        if (hi.resolved && hi.value > 0) return refine(f, lo, hi, opt.root);
        if (hi.resolved && hi.value < 0) lo = hi;
    }
    throw BracketFailure("no sign change of c_iso found up to gamma = 1e3");
}

RootResult find_gamma_plus(int N, double s, const RootOptions& opt) {
    const RootResult tilde = find_gamma_tilde(N, s, opt);
    auto f = [&](double g) { return c_n_plus(g, s, N, opt.quad); };
    Probe lo = probe(f, tilde.root);
    if (!(lo.value < 0)) throw BracketFailure("c_n_plus is not negative at gamma_tilde");
    for (double g = 2.0 * tilde.root; g <= 2048.0; g *= 2.0) {
        const Probe hi = probe(f, g);
        if (hi.resolved && hi.value > 0) {
            RootResult r = refine(f, lo, hi, opt.root);
            if (!(r.root > tilde.root)) throw InvariantViolation("gamma_plus does not exceed gamma_tilde");
            return r;
        }
        if (hi.resolved && hi.value < 0) lo = hi;
    }
    throw BracketFailure("no sign change of c_n_plus found up to gamma = 2e3");
}

ConstantsBundle ConstantsBundle::compute(const ProblemParams& p, const RootOptions& opt) {
    ConstantsBundle b{p.s, p.N, p.k, normalizing_constant(p.s), std::nullopt, 0.0, 0.0, beta_1ms_s(p.s)};
    if (auto r = find_gamma_bar(p.k, p.s, opt)) b.gamma_bar = r->root;
    b.gamma_tilde = find_gamma_tilde(p.N, p.s, opt).root;
    b.gamma_plus = find_gamma_plus(p.N, p.s, opt).root;
    return b;
}

std::string BoundCell::text() const {
    switch (kind) {
        case Kind::exact: return num(value);
        case Kind::lower: return ">=" + num(value);
        case Kind::upper: return "<=" + num(value);
        case Kind::interval: return "[" + num(lo) + "," + num(hi) + "]";
        case Kind::minus_infinity: return "-inf";
    }
    return "";
}

std::string ExponentTable::to_csv() const {
    std::ostringstream os;
    os << "operator,p_upper_crit,p_lower_crit_growth,p_lower_crit\r\n";
    for (const auto& r : rows) {
        os << r.op << ',' << r.p_upper_crit.text() << ',' << r.p_lower_crit_growth.text() << ','
           << r.p_lower_crit.text() << "\r\n";
    }
    return os.str();
}

ExponentTable exponent_table(int N, double s, const RootOptions& opt) {
    require_order(s);
    require_dimension(N);
    ExponentTable t{N, s, {}};
    const double gplus = find_gamma_plus(N, s, opt).root;
    for (int k = 1; k <= N; ++k) {
        ExponentRow r;
        r.op = "I_" + std::to_string(k) + "^-";
        r.k = k;
        r.plus = false;
        if (k < N) {
            r.p_upper_crit = BoundCell::exact_value(1.0);
            r.p_lower_crit_growth = BoundCell::exact_value(1.0);
            r.p_lower_crit = BoundCell::exact_value(1.0);
        } else {
            r.p_upper_crit = BoundCell::upper_bound(1.0 + 2.0 * s / gplus);
            r.p_lower_crit_growth = BoundCell::minus_inf();
            r.p_lower_crit = BoundCell::range(-1.0, 0.0);
        }
        t.rows.push_back(r);
    }
    for (int k = 1; k <= N; ++k) {
        ExponentRow r;
        r.op = "I_" + std::to_string(k) + "^+";
        r.k = k;
        r.plus = true;
        const auto gbar = find_gamma_bar(k, s, opt);
        if (k == 1 && s >= 0.5) {
            r.p_upper_crit = BoundCell::lower_bound(1.0 / (1.0 - s));
        } else {
            if (!gbar) throw InvariantViolation("gamma_bar missing where it must exist");
            r.p_upper_crit = BoundCell::lower_bound(1.0 + 2.0 * s / (gbar->root + 1.0));
        }
        if (gbar) r.whole_space_reference = 1.0 + 2.0 * s / gbar->root;
        r.p_lower_crit_growth = BoundCell::minus_inf();
        r.p_lower_crit = (k < N) ? BoundCell::upper_bound(0.0) : BoundCell::range(-1.0, 0.0);
        t.rows.push_back(r);
    }
    return t;
}

}  // namespace fractrunc
