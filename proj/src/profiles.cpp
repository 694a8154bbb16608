#include "fractrunc/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fractrunc/constants.hpp"
#include "fractrunc/errors.hpp"

namespace fractrunc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// d^j/dr^j of r^a.
double power_derivative(double a, double r, int j) {
    double c = 1.0;
    for (int i = 0; i < j; ++i) c *= (a - i);
    return c * std::pow(r, a - j);
}

nlohmann::json vec_json(const Vec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

}  // namespace

std::array<double, 4> make_cap(double gamma, double junction_r2) {
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    if (!(junction_r2 > 0.0)) throw DomainError("junction radius must be positive");
    std::array<double, 4> c{};
    double fact = 1.0;
    for (int j = 0; j < 4; ++j) {
        if (j > 0) fact *= j;
        c[j] = power_derivative(-gamma / 2.0, junction_r2, j) / fact;
    }
    return c;
}

// ---------------------------------------------------------------- radial

RadialProfile::RadialProfile(double gamma, double junction_r2, Orientation orientation, std::string name)
    : gamma_(gamma), junction_r2_(junction_r2), orientation_(orientation), name_(std::move(name)) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be positive and finite");
    if (!(junction_r2 > 0.0)) throw DomainError("junction radius must be positive");
    double fact = 1.0;
    for (int j = 0; j < 4; ++j) {
        if (j > 0) fact *= j;
        cap_[j] = tail(junction_r2_, j) / fact;
    }
}

double RadialProfile::tail(double r, int derivative) const {
    if (orientation_ == Orientation::decay) return power_derivative(-gamma_ / 2.0, r, derivative);
    return -power_derivative(gamma_ / 2.0, r, derivative);
}

double RadialProfile::g(double r) const {
    if (r >= junction_r2_) return tail(r, 0);
    const double d = r - junction_r2_;
    return cap_[0] + d * (cap_[1] + d * (cap_[2] + d * cap_[3]));
}

double RadialProfile::dg(double r) const {
    if (r >= junction_r2_) return tail(r, 1);
    const double d = r - junction_r2_;
    return cap_[1] + d * (2.0 * cap_[2] + 3.0 * d * cap_[3]);
}

double RadialProfile::d2g(double r) const {
    if (r >= junction_r2_) return tail(r, 2);
    return 2.0 * cap_[2] + 6.0 * cap_[3] * (r - junction_r2_);
}

double RadialProfile::d3g(double r) const {
    if (r >= junction_r2_) return tail(r, 3);
    return 6.0 * cap_[3];
}

void RadialProfile::validate() const {
    // Junction matching through third order.
    double fact = 1.0;
    for (int j = 0; j < 4; ++j) {
        if (j > 0) fact *= j;
        const double t = tail(junction_r2_, j);
        if (std::abs(cap_[j] * fact - t) > 1e-12 * std::max(1.0, std::abs(t)))
            throw InvariantViolation(name_ + ": cap and tail do not match at the junction");
    }
    const int n = 1000;
    const double r_max = 4.0 * junction_r2_;
    const double h = r_max / n;
    std::vector<double> second(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double r = std::max(i * h, 1e-300);
        second[i] = d2g(r);
        if (second[i] < -1e-9) throw InvariantViolation(name_ + ": profile is not convex on the check grid");
        if (orientation_ == Orientation::growth && r <= 1.0 && g(r) > -std::pow(r, gamma_ / 2.0) + 1e-12)
            throw InvariantViolation(name_ + ": cap exceeds -r^(gamma/2) on [0,1]");
    }
    // Convexity of g'' through second differences, scaled to the local size.
    for (int i = 1; i < n; ++i) {
        const double dd = second[i - 1] - 2.0 * second[i] + second[i + 1];
        const double scale = std::abs(second[i - 1]) + 2.0 * std::abs(second[i]) + std::abs(second[i + 1]);
        if (dd < -1e-9 * std::max(1.0, scale)) throw InvariantViolation(name_ + ": second derivative is not convex");
    }
}

std::vector<Surface> RadialProfile::surfaces(int N) const {
    return {Surface::sphere(Vec::Zero(N), std::sqrt(junction_r2_), 3.0)};
}

double RadialProfile::smooth_scale(const Vec& x) const {
    // The tail r^{a} is analytic away from the origin; the cap is a polynomial.
    const double r2 = x.squaredNorm();
    return r2 > junction_r2_ ? std::sqrt(r2) : kInf;
}

LineSection RadialProfile::section(const Vec& x, const Vec& xi) const {
    // |x + τξ|² written around the closest point to keep the cancellation small.
    const double b = x.dot(xi);
    const double perp2 = std::max(0.0, x.squaredNorm() - b * b);
    auto eval = [this, b, perp2](double t) { return g(perp2 + (t + b) * (t + b)); };
    return finish_section(eval, x, xi);
}

nlohmann::json RadialProfile::params() const {
    return {{"gamma", gamma_},
            {"junction_r2", junction_r2_},
            {"orientation", orientation_ == Orientation::decay ? "decay" : "growth"}};
}

RadialPtr make_w_gamma(double gamma) {
    auto p = std::make_shared<RadialProfile>(gamma, 0.5, RadialProfile::Orientation::decay, "w_gamma");
    p->validate();
    return p;
}

RadialPtr make_v_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("v_gamma needs gamma in (0,1)");
    auto p = std::make_shared<RadialProfile>(gamma, 1.0, RadialProfile::Orientation::decay, "v_gamma");
    p->validate();
    return p;
}

RadialPtr make_v_minus_gamma(double gamma, double s) {
    require_order(s);
    if (!(s > 0.5)) throw DomainError("v_minus_gamma needs s in (1/2,1)");
    if (!(gamma > 0.0 && gamma <= 2.0 * s - 1.0 + 1e-15)) throw DomainError("v_minus_gamma needs gamma in (0, 2s-1]");
    auto p = std::make_shared<RadialProfile>(gamma, 1.0, RadialProfile::Orientation::growth, "v_minus_gamma");
    p->validate();
    return p;
}

// ---------------------------------------------------------------- ∂_d v

RadialDerivative::RadialDerivative(RadialPtr profile, Vec direction) : profile_(std::move(profile)), d_(std::move(direction)) {
    if (!profile_) throw DomainError("radial derivative needs a profile");
    if (!(d_.norm() > 0.0)) throw DomainError("direction must be nonzero");
}

double RadialDerivative::value(const Vec& x) const { return 2.0 * x.dot(d_) * profile_->dg(x.squaredNorm()); }

std::vector<Surface> RadialDerivative::surfaces(int N) const {
    auto s = profile_->surfaces(N);
    for (auto& f : s) f.exponent -= 1.0;
    return s;
}

double RadialDerivative::growth_alpha() const { return std::max(0.0, profile_->growth_alpha() - 1.0); }

LineSection RadialDerivative::section(const Vec& x, const Vec& xi) const {
    const double b = x.dot(xi);
    const double perp2 = std::max(0.0, x.squaredNorm() - b * b);
    const double xd = x.dot(d_), xid = xi.dot(d_);
    auto prof = profile_;
    auto eval = [prof, b, perp2, xd, xid](double t) {
        return 2.0 * (xd + t * xid) * prof->dg(perp2 + (t + b) * (t + b));
    };
    return finish_section(eval, x, xi);
}

nlohmann::json RadialDerivative::params() const {
    return {{"profile", profile_->kind()}, {"profile_params", profile_->params()}, {"direction", vec_json(d_)}};
}

// ---------------------------------------------------------------- ψ

PsiField::PsiField(PsiKind kind, int k, double s, double gamma_bar, double gamma, std::vector<Term> terms)
    : kind_(kind), k_(k), s_(s), gamma_bar_(gamma_bar), gamma_(gamma), terms_(std::move(terms)) {}

double PsiField::value(const Vec& x) const {
    const double r = x.squaredNorm();
    const double xn = x(x.size() - 1);
    double acc = 0.0;
    for (const auto& t : terms_) acc += t.weight * t.profile->dg(r);
    return -2.0 * xn * acc;
}

std::vector<Surface> PsiField::surfaces(int N) const {
    std::vector<Surface> out;
    for (const auto& t : terms_) {
        auto s = t.profile->surfaces(N);
        for (auto& f : s) {
            f.exponent -= 1.0;
            out.push_back(f);
        }
    }
    return out;
}

double PsiField::smooth_scale(const Vec& x) const {
    double j = 0.0;
    for (const auto& t : terms_) j = std::max(j, t.profile->junction_r2());
    const double r2 = x.squaredNorm();
    return r2 > j ? std::sqrt(r2) : kInf;
}

LineSection PsiField::section(const Vec& x, const Vec& xi) const {
    const double b = x.dot(xi);
    const double perp2 = std::max(0.0, x.squaredNorm() - b * b);
    const Eigen::Index n = x.size() - 1;
    const double xn = x(n), xin = xi(n);
    auto terms = terms_;
    auto eval = [terms, b, perp2, xn, xin](double t) {
        const double r = perp2 + (t + b) * (t + b);
        double acc = 0.0;
        for (const auto& term : terms) acc += term.weight * term.profile->dg(r);
        return -2.0 * (xn + t * xin) * acc;
    };
    auto sec = finish_section(eval, x, xi);
    // ψ grows like |x|^{γ-1} in the growth construction, bounded otherwise.
    double alpha = 0.0;
    for (const auto& t : terms_) alpha = std::max(alpha, t.profile->growth_alpha() - 1.0);
    sec.growth_alpha = std::max(0.0, alpha);
    return sec;
}

std::string PsiField::kind() const {
    switch (kind_) {
        case PsiKind::decay: return "psi_decay";
        case PsiKind::halfint: return "psi_halfint";
        case PsiKind::growth: return "psi_growth";
    }
    return "psi";
}

nlohmann::json PsiField::params() const {
    nlohmann::json j = {{"k", k_}, {"s", s_}, {"gamma", gamma_}};
    j["gamma_bar"] = std::isfinite(gamma_bar_) ? nlohmann::json(gamma_bar_) : nlohmann::json(nullptr);
    return j;
}

PsiPtr make_psi(PsiKind kind, int k, double s, std::optional<double> gamma) {
    require_order(s);
    if (k < 1) throw DomainError("k must be at least 1");
    switch (kind) {
        case PsiKind::decay: {
            auto root = find_gamma_bar(k, s);
            if (!root) throw NoRoot("c_k keeps one sign on (0,1): gamma_bar does not exist for this (k, s)");
            const double gb = root->root;
            const double g = gamma.value_or(std::min(gb + 0.2, 0.5 * (1.0 + gb)));
            if (!(g > gb && g < 1.0)) throw DomainError("psi decay needs gamma in (gamma_bar, 1)");
            std::vector<PsiField::Term> terms{{1.0 / gb, make_v_gamma(gb)}, {1.0 / gb, make_v_gamma(g)}};
            return std::make_shared<PsiField>(kind, k, s, gb, g, std::move(terms));
        }
        case PsiKind::halfint: {
            if (k != 1) throw DomainError("psi halfint needs k = 1");
            if (s < 0.5) throw DomainError("psi halfint needs s >= 1/2");
            const double g = gamma.value_or(0.5);
            if (!(g > 0.0 && g < 1.0)) throw DomainError("psi halfint needs gamma in (0,1)");
            std::vector<PsiField::Term> terms{{1.0 / g, make_v_gamma(g)}};
            return std::make_shared<PsiField>(kind, k, s, std::numeric_limits<double>::quiet_NaN(), g, std::move(terms));
        }
        case PsiKind::growth: {
            if (!(s > 0.5)) throw DomainError("psi growth needs s > 1/2");
            if (k != 1) throw DomainError("psi growth needs k = 1");
            const double gb = 2.0 * s - 1.0;
            const double g = gamma.value_or(0.5 * gb);
            if (!(g > 0.0 && g < gb)) throw DomainError("psi growth needs gamma in (0, 2s-1)");
            std::vector<PsiField::Term> terms{{1.0 / gb, make_v_minus_gamma(gb, s)}, {1.0 / gb, make_v_minus_gamma(g, s)}};
            return std::make_shared<PsiField>(kind, k, s, gb, g, std::move(terms));
        }
    }
    throw DomainError("unknown psi kind");
}

// ---------------------------------------------------------------- Hurwitz ζ

double hurwitz_zeta(double p, double a) {
    if (!(p > 1.0)) throw DomainError("hurwitz_zeta needs p > 1");
    if (!(a > 0.0)) throw DomainError("hurwitz_zeta needs a > 0");
    // Euler-Maclaurin after shifting a past 10 + p.
    constexpr double bern[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730,
                               7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330};
    const int shift = static_cast<int>(std::ceil(std::max(0.0, 12.0 + p - a)));
    double sum = 0.0;
    for (int n = 0; n < shift; ++n) sum += std::pow(n + a, -p);
    const double x = a + shift;
    sum += std::pow(x, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(x, -p);
    // term_j = B_{2j}/(2j)! · p(p+1)…(p+2j-2) · x^{-p-2j+1}
    double rising = p;  // p(p+1)…(p+2j-2)
    double fact = 2.0;  // (2j)!
    double xp = std::pow(x, -p - 1.0);
    for (int j = 1; j <= 10; ++j) {
        const double term = bern[j - 1] / fact * rising * xp;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        rising *= (p + 2 * j - 1) * (p + 2 * j);
        fact *= (2 * j + 1) * (2 * j + 2);
        xp /= x * x;
    }
    return sum;
}

// ---------------------------------------------------------------- bump train

BumpTrain::BumpTrain(double eps, double s, int window) : eps_(eps), s_(s), window_(window) {
    require_order(s);
    if (!(eps > 0.0 && eps < 0.5)) throw DomainError("bump train needs eps in (0, 1/2)");
    if (window < 1) throw DomainError("bump train window must be at least 1");
}

double BumpTrain::along(double t) const {
    if (!(t > 0.0)) return 0.0;
    const double n = std::floor(t);
    const double u = t - n;
    if (u >= 2.0 * eps_) return 0.0;
    return std::pow(u * (2.0 * eps_ - u), s_);
}

std::vector<Surface> BumpTrain::surfaces(int N) const {
    // Edges of the bumps within the evaluation window of the origin; sections
    // compute their own edges around the query point.
    std::vector<Surface> out;
    const Vec en = unit(N, N - 1);
    for (int n = 0; n < window_; ++n) {
        out.push_back(Surface::hyperplane(en, n, s_));
        out.push_back(Surface::hyperplane(en, n + 2.0 * eps_, s_));
    }
    return out;
}

double BumpTrain::smooth_scale(const Vec& x) const {
    const double t = x(x.size() - 1);
    if (t <= 0.0) return -t;
    const double n = std::floor(t);
    const double u = t - n;
    const double d = (u < 2.0 * eps_) ? std::min(u, 2.0 * eps_ - u) : std::min(u - 2.0 * eps_, 1.0 - u);
    return d;
}

LineSection BumpTrain::section(const Vec& x, const Vec& xi) const {
    const double t0 = x(x.size() - 1);
    const double ad = std::abs(xi(xi.size() - 1));
    LineSection sec;
    if (ad < 1e-15) {
        const double v = along(t0);
        sec.eval = [v](double) { return v; };
        sec.constant = true;
        return sec;
    }
    // The directional operator only sees u(x+τξ) + u(x-τξ), so flipping ξ to
    // ξ_N > 0 changes nothing.
    const double eps = eps_, s = s_;
    auto along_fn = [eps, s](double t) {
        if (!(t > 0.0)) return 0.0;
        const double n = std::floor(t);
        const double u = t - n;
        if (u >= 2.0 * eps) return 0.0;
        return std::pow(u * (2.0 * eps - u), s);
    };
    sec.eval = [along_fn, t0, ad](double tau) { return along_fn(t0 + tau * ad); };
    const double W = window_;
    const double T = W / ad;
    double window = kInf;
    const double touch = 1e-12 * std::max(1.0, std::abs(t0));
    const int n_lo = std::max(0, static_cast<int>(std::floor(t0 - W)) - 1);
    const int n_hi = static_cast<int>(std::ceil(t0 + W)) + 1;
    for (int n = n_lo; n <= n_hi; ++n) {
        for (double e : {static_cast<double>(n), n + 2.0 * eps_}) {
            if (std::abs(e - t0) > W + 2.0) continue;
            const double tau = (e - t0) / ad;
            if (std::abs(tau) * ad <= touch) throw DomainError("evaluation point lies on a bump edge");
            window = std::min(window, std::abs(tau));
            if (std::abs(tau) < T) sec.discontinuities.push_back({tau, s_});
        }
    }
    std::sort(sec.discontinuities.begin(), sec.discontinuities.end(),
              [](const Breakpoint& a, const Breakpoint& b) { return a.tau < b.tau; });
    sec.c2_window = window;
    sec.growth_alpha = 0.0;
    sec.far_start = T;
    sec.far_field = [eps, s, t0, ad, along_fn](double s_op, double Tf, const quad::Tolerance& tol) {
        const double q = 1.0 + 2.0 * s_op;
        const double w = eps / ad;  // half-width of one bump in τ
        // Moments M_j = ∫_{-1}^{1} v^j (1-v²)^s dv = B((j+1)/2, s+1), j even.
        auto moment_series = [&](auto&& power_sum) {
            double total = 0.0;
            double binom = 1.0;  // binom(-q, j)
            for (int j = 0; j <= 60; j += 2) {
                const double Mj = std::exp(std::lgamma((j + 1) / 2.0) + std::lgamma(s + 1.0) - std::lgamma((j + 1) / 2.0 + s + 1.0));
                const double term = binom * std::pow(w, j) * Mj * power_sum(q + j);
                total += term;
                if (j > 0 && std::abs(term) <= 1e-17 * std::abs(total)) break;
                binom *= (-q - j) * (-q - j - 1) / ((j + 1.0) * (j + 2.0));
            }
            return std::pow(eps, 2.0 * s) * w * total;
        };
        quad::QuadResult out{0.0, 0.0, 0};
        auto straddle = [&](double a, double b, double sign) {
            // ∫_a^b along(t0 + sign·τ·ad) τ^{-q} dτ, b at a bump edge.
            if (!(b > a)) return;
            quad::Integrand f;
            f.eval = [&, sign](double tau) { return along_fn(t0 + sign * tau * ad) * std::pow(tau, -q); };
            f.singular_points = {{b, s, {}}};
            auto r = quad::integrate(f, a, b, tol.tightened(0.25));
            out += r;
        };
        // Positive side: bumps at t = t0 + τ ad, τ ≥ T.
        {
            const double yT = t0 + Tf * ad;
            int n1 = 0;
            if (yT >= 0.0) {
                const double ns = std::floor(yT);
                if (yT - ns < 2.0 * eps) straddle(Tf, (ns + 2.0 * eps - t0) / ad, 1.0);
                n1 = static_cast<int>(ns) + 1;
            }
            const double a = n1 + eps - t0;  // centre offset of the first full bump, in t
            // Σ_n τ_c^{-p} with τ_c = (n + ε - t0)/ad equals ad^p ζ(p, a).
            auto psum = [&](double p) { return std::pow(ad, p) * hurwitz_zeta(p, a); };
            out.value += moment_series(psum);
        }
        // Negative side: t = t0 - τ ad, τ ≥ T.
        {
            const double yL = t0 - Tf * ad;
            if (yL > 0.0) {
                const double ns = std::floor(yL);
                long n2 = static_cast<long>(ns);
                if (yL - ns < 2.0 * eps) {
                    straddle(Tf, (t0 - ns) / ad, -1.0);
                    n2 -= 1;
                }
                if (n2 >= 0) {
                    auto psum = [&](double p) {
                        double acc = 0.0;
                        if (n2 <= 5000) {
                            for (long n = 0; n <= n2; ++n) acc += std::pow(t0 - eps - n, -p);
                        } else {
                            acc = hurwitz_zeta(p, t0 - eps - n2) - hurwitz_zeta(p, t0 - eps + 1.0);
                        }
                        return std::pow(ad, p) * acc;
                    };
                    out.value += moment_series(psum);
                }
            }
        }
        out.abs_error_estimate += 1e-14 * std::abs(out.value);
        return out;
    };
    return sec;
}

nlohmann::json BumpTrain::params() const { return {{"eps", eps_}, {"s", s_}, {"window", window_}}; }

std::shared_ptr<const BumpTrain> make_bump_train(double eps, double s, int window) {
    return std::make_shared<BumpTrain>(eps, s, window);
}

// ---------------------------------------------------------------- u_γ on the half-space

HalfSpacePowerTail::HalfSpacePowerTail(double gamma, double shift)
    : profile_(gamma, 1.0, RadialProfile::Orientation::decay, "v_gamma"), shift_(shift) {
    if (!(shift >= 0.0)) throw DomainError("shift must be non-negative");
    profile_.validate();
}

double HalfSpacePowerTail::value(const Vec& x) const {
    const Eigen::Index n = x.size() - 1;
    const double yn = x(n) + shift_;
    if (!(yn > 0.0)) return 0.0;
    return profile_.g(x.squaredNorm() - x(n) * x(n) + yn * yn);
}

std::vector<Surface> HalfSpacePowerTail::surfaces(int N) const {
    Vec c = Vec::Zero(N);
    c(N - 1) = -shift_;
    return {Surface::hyperplane(unit(N, N - 1), -shift_, 0.0), Surface::sphere(c, 1.0, 3.0)};
}

double HalfSpacePowerTail::smooth_scale(const Vec& x) const {
    Vec y = x;
    y(y.size() - 1) += shift_;
    const double r = y.norm();
    return r > 1.0 ? r : kInf;
}

LineSection HalfSpacePowerTail::section(const Vec& x, const Vec& xi) const {
    Vec y = x;
    const Eigen::Index n = y.size() - 1;
    y(n) += shift_;
    const double b = y.dot(xi);
    const double perp2 = std::max(0.0, y.squaredNorm() - b * b);
    const double yn = y(n), xin = xi(n);
    const RadialProfile* prof = &profile_;
    auto eval = [prof, b, perp2, yn, xin](double t) {
        if (!(yn + t * xin > 0.0)) return 0.0;
        return prof->g(perp2 + (t + b) * (t + b));
    };
    return finish_section(eval, x, xi);
}

nlohmann::json HalfSpacePowerTail::params() const { return {{"gamma", gamma()}, {"shift", shift_}}; }

std::shared_ptr<const HalfSpacePowerTail> make_halfspace_power_tail(double gamma, double shift) {
    return std::make_shared<HalfSpacePowerTail>(gamma, shift);
}

// ---------------------------------------------------------------- (x_N)_+^μ

PowerProfile::PowerProfile(double mu, double coef, std::string name) : mu_(mu), coef_(coef), name_(std::move(name)) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("power profile needs mu > 0");
    if (!std::isfinite(coef)) throw DomainError("power profile coefficient must be finite");
}

double PowerProfile::value(const Vec& x) const {
    const double t = x(x.size() - 1);
    return t > 0.0 ? coef_ * std::pow(t, mu_) : 0.0;
}

std::vector<Surface> PowerProfile::surfaces(int N) const { return {Surface::hyperplane(unit(N, N - 1), 0.0, mu_)}; }

double PowerProfile::smooth_scale(const Vec& x) const {
    const double t = x(x.size() - 1);
    return t > 0.0 ? t : kInf;
}

LineSection PowerProfile::section(const Vec& x, const Vec& xi) const {
    const double t0 = x(x.size() - 1), d = xi(xi.size() - 1);
    if (std::abs(d) < 1e-15) {
        LineSection sec;
        const double v = value(x);
        sec.eval = [v](double) { return v; };
        sec.constant = true;
        sec.growth_alpha = mu_;
        return sec;
    }
    const double mu = mu_, c = coef_;
    auto eval = [t0, d, mu, c](double tau) {
        const double t = t0 + tau * d;
        return t > 0.0 ? c * std::pow(t, mu) : 0.0;
    };
    return finish_section(eval, x, xi);
}

nlohmann::json PowerProfile::params() const { return {{"mu", mu_}, {"coef", coef_}}; }

std::shared_ptr<const PowerProfile> make_power_profile(double mu) {
    return std::make_shared<PowerProfile>(mu, 1.0, "power_profile");
}

// ---------------------------------------------------------------- min

MinComposition::MinComposition(FieldPtr a, FieldPtr b, double scale) : a_(std::move(a)), b_(std::move(b)), scale_(scale) {
    if (!a_ || !b_) throw DomainError("min composition needs two fields");
    if (!(scale > 0.0)) throw DomainError("min composition scale must be positive");
}

double MinComposition::value(const Vec& x) const { return scale_ * std::min(a_->value(x), b_->value(x)); }

std::vector<Surface> MinComposition::surfaces(int N) const {
    auto s = a_->surfaces(N);
    auto t = b_->surfaces(N);
    s.insert(s.end(), t.begin(), t.end());
    return s;
}

double MinComposition::growth_alpha() const { return std::min(a_->growth_alpha(), b_->growth_alpha()); }

double MinComposition::smooth_scale(const Vec& x) const { return std::min(a_->smooth_scale(x), b_->smooth_scale(x)); }

LineSection MinComposition::section(const Vec& x, const Vec& xi) const {
    auto sa = a_->section(x, xi);
    auto sb = b_->section(x, xi);
    const double sc = scale_;
    auto fa = sa.eval, fb = sb.eval;
    LineSection sec;
    sec.eval = [fa, fb, sc](double t) { return sc * std::min(fa(t), fb(t)); };
    sec.growth_alpha = std::min(sa.growth_alpha, sb.growth_alpha);
    sec.discontinuities = sa.discontinuities;
    sec.discontinuities.insert(sec.discontinuities.end(), sb.discontinuities.begin(), sb.discontinuities.end());
    double window = std::min(sa.c2_window, sb.c2_window);

    // Crossings of a and b are kinks of the minimum.  Scan a log-spaced grid on
    // both sides and bisect each sign change of a - b.
    auto diff = [fa, fb](double t) { return fa(t) - fb(t); };
    const double d0 = diff(0.0);
    const double scale = std::max(1.0, x.norm());
    if (std::abs(d0) <= 1e-13 * std::max(std::abs(fa(0.0)), 1e-300) && fa(0.0) != 0.0)
        throw DomainError("evaluation point lies on the crossing of the two branches");
    for (double sign : {1.0, -1.0}) {
        double prev_t = 0.0, prev = d0;
        const int n = 400;
        for (int i = 1; i <= n; ++i) {
            const double t = sign * scale * 1e-6 * std::pow(1e10, static_cast<double>(i) / n);
            const double cur = diff(t);
            if ((prev < 0.0) != (cur < 0.0) && std::isfinite(prev) && std::isfinite(cur)) {
                double lo = prev_t, hi = t, flo = prev;
                for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = diff(mid);
                    if ((fm < 0.0) == (flo < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                const double root = 0.5 * (lo + hi);
                sec.discontinuities.push_back({root, 1.0});
                window = std::min(window, std::abs(root));
            }
            prev_t = t;
            prev = cur;
        }
    }
    std::sort(sec.discontinuities.begin(), sec.discontinuities.end(),
              [](const Breakpoint& p, const Breakpoint& q) { return p.tau < q.tau; });
    sec.c2_window = window;
    return sec;
}

nlohmann::json MinComposition::params() const {
    return {{"scale", scale_},
            {"first", {{"kind", a_->kind()}, {"params", a_->params()}}},
            {"second", {{"kind", b_->kind()}, {"params", b_->params()}}}};
}

// ---------------------------------------------------------------- constructions

ThinSupersolution build_thIN_supersolution(int N, double s, double p, std::optional<double> mu) {
    require_order(s);
    require_dimension(N);
    const double gplus = find_gamma_plus(N, s).root;
    const double threshold = 1.0 + 2.0 * s / gplus;
    if (!(p > threshold))
        throw ExponentOutOfRange("p must exceed 1 + 2s/gamma_plus = " + std::to_string(threshold), threshold);
    ThinSupersolution out{};
    out.gamma_plus = gplus;
    out.gamma = 2.0 * s / (p - 1.0);
    out.R = std::sqrt(static_cast<double>(N) / (N - 1));
    out.mu = mu.value_or(0.5 * s);
    if (!(out.mu > 0.0 && out.mu < s)) throw DomainError("mu must lie in (0, s)");
    const double Cs = normalizing_constant(s);
    out.alpha = -c_n_plus(out.gamma, s, N).value * Cs;
    out.beta = -c_s_mu(out.mu, s).value * Cs;
    if (!(out.alpha > 0.0)) throw InvariantViolation("alpha = -C_s c_N^+(gamma) is not positive");
    if (!(out.beta > 0.0)) throw InvariantViolation("beta = -C_s c_{s,mu} is not positive");
    out.eps = std::pow(std::min(out.alpha, out.beta), 1.0 / (p - 1.0));
    auto phi = make_halfspace_power_tail(out.gamma, out.R);
    auto z = make_power_profile(out.mu);
    out.u = std::make_shared<MinComposition>(phi, z, out.eps);
    return out;
}

SingularSupersolution build_singular_supersolution(double s, double p, SingularOp op, int N) {
    require_order(s);
    require_dimension(N);
    if (!(p < -1.0)) throw ExponentOutOfRange("p must be below -1", -1.0);
    SingularSupersolution out{};
    out.mu = 2.0 * s / (1.0 - p);
    const double C = normalizing_constant(s) * c_s_mu(out.mu, s).value;
    if (!(C < 0.0)) throw InvariantViolation("C_s c_{s,mu} is not negative for mu < s");
    const double num = (op == SingularOp::in_plus) ? std::pow(static_cast<double>(N), s) : 1.0;
    out.M = std::pow(num / std::abs(C), 1.0 / (1.0 - p));
    out.u = std::make_shared<PowerProfile>(out.mu, out.M, "singular_power");
    return out;
}

TransformParams::TransformParams(double p_, double q_) : p(p_), q(q_) {
    if (!std::isfinite(p) || !std::isfinite(q)) throw DomainError("transform exponents must be finite");
    if (p == q && p != 1.0) {
        beta_exp = 1.0;
        alpha_coef = 1.0;
        return;
    }
    if (!((1.0 < p && p < q) || (q < p && p < 1.0))) throw DomainError("transform needs 1 < p < q or q < p < 1");
    beta_exp = (p - 1.0) / (q - 1.0);
    alpha_coef = std::pow(beta_exp, 1.0 / (q - 1.0));
}

PowerTransform::PowerTransform(FieldPtr base, TransformParams params) : base_(std::move(base)), t_(params) {
    if (!base_) throw DomainError("power transform needs a base field");
}

double PowerTransform::value(const Vec& x) const {
    const double u = base_->value(x);
    if (u < 0.0) throw DomainError("power transform needs a non-negative base");
    return u > 0.0 ? t_.alpha_coef * std::pow(u, t_.beta_exp) : 0.0;
}

std::vector<Surface> PowerTransform::surfaces(int N) const {
    auto s = base_->surfaces(N);
    for (auto& f : s) f.exponent *= t_.beta_exp;
    return s;
}

LineSection PowerTransform::section(const Vec& x, const Vec& xi) const {
    auto sec = base_->section(x, xi);
    if (sec.far_field) throw DomainError("power transform of a field with an analytic far field is not supported");
    const double a = t_.alpha_coef, b = t_.beta_exp;
    auto f = sec.eval;
    sec.eval = [f, a, b](double t) {
        const double u = f(t);
        return u > 0.0 ? a * std::pow(u, b) : 0.0;
    };
    for (auto& bp : sec.discontinuities) bp.exponent *= b;
    sec.growth_alpha *= b;
    return sec;
}

nlohmann::json PowerTransform::params() const {
    return {{"p", t_.p}, {"q", t_.q}, {"base", {{"kind", base_->kind()}, {"params", base_->params()}}}};
}

std::shared_ptr<const PowerTransform> power_transform(FieldPtr base, double p, double q) {
    return std::make_shared<PowerTransform>(std::move(base), TransformParams(p, q));
}

}  // namespace fractrunc
