#include "fractrunc/operators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

#include "fractrunc/constants.hpp"
#include "fractrunc/errors.hpp"

namespace fractrunc {

using quad::QuadResult;
using quad::Tolerance;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Even-polynomial fit g(τ) ≈ Σ_{i=1}^m c_i τ^{2i} through τ_j = δ/2^j and its
// exact integral against τ^{-1-2s} on (0, δ).
struct EvenFit {
    double integral;
    double c1;
};

EvenFit even_fit(const std::vector<double>& samples, int m, double delta, double s) {
    // Unknowns a_i = c_i δ^{2i}, so the system only involves powers of 1/4.
    Eigen::MatrixXd A(m, m);
    Eigen::VectorXd rhs(m);
    for (int j = 0; j < m; ++j) {
        for (int i = 1; i <= m; ++i) A(j, i - 1) = std::pow(0.25, i * j);
        rhs(j) = samples[j];
    }
    const Eigen::VectorXd a = A.fullPivLu().solve(rhs);
    double integral = 0.0;
    for (int i = 1; i <= m; ++i) integral += a(i - 1) / (2.0 * i - 2.0 * s);
    return {integral * std::pow(delta, -2.0 * s), a(0) / (delta * delta)};
}

}  // namespace

SmallTauFit small_tau_fit(const LineSection& section, double s, double target) {
    const auto& f = section.eval;
    const double u0 = f(0.0);
    auto g = [&](double t) { return f(t) + f(-t) - 2.0 * u0; };
    double delta = std::isfinite(section.c2_window) ? 0.1 * section.c2_window : 0.1;
    SmallTauFit best{delta, 0.0, std::numeric_limits<double>::infinity()};
    for (int halving = 0; halving < 40; ++halving) {
        std::vector<double> samples(4);
        double mag = std::abs(u0);
        for (int j = 0; j < 4; ++j) {
            const double t = delta * std::pow(0.5, j);
            samples[j] = g(t);
            mag = std::max({mag, std::abs(f(t)), std::abs(f(-t))});
        }
        const EvenFit f3 = even_fit(samples, 3, delta, s);
        const EvenFit f4 = even_fit(samples, 4, delta, s);
        // Rounding in the samples, amplified by the fit, against the truncation.
        const double noise = 64.0 * kEps * mag * std::pow(delta, -2.0 * s) / (2.0 - 2.0 * s);
        const double err = std::abs(f4.integral - f3.integral) + noise;
        if (err < best.error) {
            best = {delta, f4.c1, err};
        }
        if (err <= target) break;
        if (noise > target) break;  // halving further only adds rounding
        delta *= 0.5;
    }
    return best;
}

QuadResult directional(const LineSection& section, double s, const Tolerance& tol, bool include_Cs) {
    require_order(s);
    if (section.constant) return {0.0, 0.0, 1};
    if (section.growth_alpha >= 2.0 * s)
        throw GrowthViolation("section grows like |τ|^" + std::to_string(section.growth_alpha) +
                              ", the operator needs an exponent below 2s = " + std::to_string(2.0 * s));
    const auto f = section.eval;
    const double u0 = f(0.0);
    if (!std::isfinite(u0)) throw DomainError("field is not finite at the evaluation point");
    const double q = 1.0 + 2.0 * s;

    // Small τ: fit and integrate exactly.  The fit is recomputed here so that the
    // integral and its error come from the same δ.
    const SmallTauFit fit = small_tau_fit(section, s, tol.abs_tol / 4.0);
    const double delta = fit.delta;
    std::vector<double> samples(4);
    for (int j = 0; j < 4; ++j) {
        const double t = delta * std::pow(0.5, j);
        samples[j] = f(t) + f(-t) - 2.0 * u0;
    }
    QuadResult total{even_fit(samples, 4, delta, s).integral, fit.error, 8};

    // Breakpoints of the symmetric sum sit at |τ_b|; keep the roughest exponent.
    std::vector<Breakpoint> bps;
    for (const auto& bp : section.discontinuities) bps.push_back({std::abs(bp.tau), bp.exponent});
    std::sort(bps.begin(), bps.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.tau < b.tau; });
    std::vector<Breakpoint> merged;
    for (const auto& bp : bps) {
        if (!merged.empty() && std::abs(bp.tau - merged.back().tau) <= 1e-14 * bp.tau) {
            merged.back().exponent = std::min(merged.back().exponent, bp.exponent);
        } else {
            merged.push_back(bp);
        }
    }

    quad::Integrand integrand;
    integrand.eval = [f, u0, q](double t) { return (f(t) + f(-t) - 2.0 * u0) * std::pow(t, -q); };
    integrand.tail_decay = q - section.growth_alpha;
    const double upper = section.far_field ? section.far_start : quad::infinity;
    for (const auto& bp : merged) {
        if (bp.tau <= delta) throw InvariantViolation("breakpoint inside the small-τ window");
        if (bp.tau < upper) integrand.singular_points.push_back({bp.tau, bp.exponent, {}});
    }
    const Tolerance inner{tol.abs_tol / 2.0, tol.rel_tol / 2.0, tol.max_evals};
    total += quad::integrate(integrand, delta, upper, inner);
    if (section.far_field) {
        total += section.far_field(s, upper, tol.tightened(4.0));
        total.value -= 2.0 * u0 * std::pow(upper, -2.0 * s) / (2.0 * s);
    }
    if (include_Cs) total *= normalizing_constant(s);
    return total;
}

QuadResult directional_at(const Field& u, const Vec& x, const Vec& xi, double s, const Tolerance& tol, bool include_Cs) {
    if (x.size() != xi.size()) throw DomainError("point and direction have different dimensions");
    if (x.size() < 1) throw DomainError("empty point");
    const double n = xi.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("direction must be a nonzero finite vector");
    const Vec d = xi / n;
    return directional(u.section(x, d), s, tol, include_Cs);
}

QuadResult frame_sum(const Field& u, const Vec& x, const Frame& frame, double s, const Tolerance& tol, bool include_Cs) {
    if (frame.dim() != x.size()) throw DomainError("frame and point have different dimensions");
    QuadResult total;
    for (int i = 0; i < frame.size(); ++i) total += directional_at(u, x, frame.vector(i), s, tol, include_Cs);
    return total;
}

QuadResult extremal_radial(const RadialProfile& profile, const Vec& x, double s, int k, RadialVariant variant,
                           const Tolerance& tol, bool include_Cs) {
    const int N = static_cast<int>(x.size());
    if (k < 1 || k > N) throw DomainError("k must lie in 1..N");
    if (!(x.norm() > 0.0)) throw DomainError("closed-form frames need x != 0");
    try {
        profile.validate();
    } catch (const InvariantViolation& e) {
        throw HypothesisViolation(std::string("radial representation does not apply: ") + e.what());
    }
    if (variant == RadialVariant::plus) return frame_sum(profile, x, completion_frame(x, k), s, tol, include_Cs);
    if (k != N) throw DomainError("the equiangular closed form is for k = N");
    const Vec xi = equiangular_frame(x).vector(0);
    QuadResult r = directional_at(profile, x, xi, s, tol.tightened(N), include_Cs);
    r *= static_cast<double>(N);
    return r;
}

namespace {

struct RestartOutcome {
    double objective = -std::numeric_limits<double>::infinity();
    Mat Q;
    bool ok = false;
};

}  // namespace

SearchResult extremal_search(const Field& u, const Vec& x, double s, int k, SearchVariant variant,
                             const SearchBudget& budget, const Tolerance& tol, bool include_Cs) {
    const int N = static_cast<int>(x.size());
    if (k < 1 || k > N) throw DomainError("k must lie in 1..N");
    if (budget.restarts < 1 || budget.sweeps < 0 || budget.angles < 2) throw DomainError("invalid search budget");
    const double sign = variant == SearchVariant::plus ? 1.0 : -1.0;
    std::atomic<long long> evaluations{0};
    std::atomic<bool> exhausted{false};

    // Signed directional value; NaN when the direction is not admissible
    // (for example it runs along a non-smooth surface through x).
    auto value_of = [&](const Vec& v) {
        evaluations.fetch_add(1, std::memory_order_relaxed);
        try {
            return sign * directional_at(u, x, v, s, budget.search_tol, include_Cs).value;
        } catch (const DomainError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    auto run_restart = [&](int r) {
        RestartOutcome out;
        std::mt19937_64 rng(budget.seed + static_cast<std::uint64_t>(r));
        Mat Q = random_orthogonal(N, rng);
        std::vector<double> vals(k);
        for (int i = 0; i < k; ++i) vals[i] = value_of(Q.col(i));
        for (int sweep = 0; sweep < budget.sweeps && !exhausted; ++sweep) {
            for (int i = 0; i < k && !exhausted; ++i) {
                for (int j = i + 1; j < N && !exhausted; ++j) {
                    const bool both = j < k;
                    const double period = both ? std::numbers::pi / 2.0 : std::numbers::pi;
                    const Vec qi = Q.col(i), qj = Q.col(j);
                    auto trial = [&](double th, double& vi, double& vj) {
                        const double c = std::cos(th), sn = std::sin(th);
                        vi = value_of(c * qi + sn * qj);
                        vj = both ? value_of(-sn * qi + c * qj) : 0.0;
                        return vi + vj;
                    };
                    const double current = vals[i] + (both ? vals[j] : 0.0);
                    double best = std::isfinite(current) ? current : -std::numeric_limits<double>::infinity();
                    double best_th = 0.0, best_vi = vals[i], best_vj = both ? vals[j] : 0.0;
                    const double step = period / budget.angles;
                    for (int m = 1; m < budget.angles; ++m) {
                        double vi, vj;
                        const double obj = trial(m * step, vi, vj);
                        if (std::isfinite(obj) && obj > best) {
                            best = obj;
                            best_th = m * step;
                            best_vi = vi;
                            best_vj = vj;
                        }
                    }
                    // Golden-section refinement inside the winning grid cell.
                    double a = best_th - step, b = best_th + step;
                    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
                    double c1 = b - ratio * (b - a), c2 = a + ratio * (b - a);
                    double vi1, vj1, vi2, vj2;
                    double f1 = trial(c1, vi1, vj1), f2 = trial(c2, vi2, vj2);
                    for (int it = 0; it < 16; ++it) {
                        const bool keep_left = !std::isfinite(f2) || (std::isfinite(f1) && f1 > f2);
                        if (keep_left) {
                            b = c2;
                            c2 = c1; f2 = f1; vi2 = vi1; vj2 = vj1;
                            c1 = b - ratio * (b - a);
                            f1 = trial(c1, vi1, vj1);
                        } else {
                            a = c1;
                            c1 = c2; f1 = f2; vi1 = vi2; vj1 = vj2;
                            c2 = a + ratio * (b - a);
                            f2 = trial(c2, vi2, vj2);
                        }
                    }
                    for (auto [th, fv, vi, vj] : {std::tuple{c1, f1, vi1, vj1}, std::tuple{c2, f2, vi2, vj2}}) {
                        if (std::isfinite(fv) && fv > best) {
                            best = fv;
                            best_th = th;
                            best_vi = vi;
                            best_vj = vj;
                        }
                    }
                    if (best_th != 0.0 && best > current) {
                        const double c = std::cos(best_th), sn = std::sin(best_th);
                        Q.col(i) = c * qi + sn * qj;
                        Q.col(j) = -sn * qi + c * qj;
                        vals[i] = best_vi;
                        if (both) vals[j] = best_vj;
                    }
                    if (evaluations.load() > budget.max_frame_evaluations) exhausted = true;
                }
            }
        }
        double total = 0.0;
        for (double v : vals) total += v;
        out.objective = total;
        out.Q = Q;
        out.ok = std::isfinite(total);
        return out;
    };

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(budget.restarts));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    unsigned hw = budget.threads > 0 ? static_cast<unsigned>(budget.threads) : std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads = std::min<unsigned>(hw, static_cast<unsigned>(budget.restarts));
    auto worker = [&]() {
        for (int r = next.fetch_add(1); r < budget.restarts; r = next.fetch_add(1)) {
            try {
                outcomes[static_cast<std::size_t>(r)] = run_restart(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    // Ties resolve to the lowest restart index, so the result does not depend
    // on thread scheduling.
    const RestartOutcome* best = nullptr;
    for (const auto& o : outcomes)
        if (o.ok && (!best || o.objective > best->objective)) best = &o;
    if (!best) throw DomainError("no admissible frame found at this point");

    SearchResult result;
    result.frame = Frame(best->Q.leftCols(k));
    result.value = frame_sum(u, x, result.frame, s, tol, include_Cs);
    result.budget_exhausted = exhausted.load();
    result.frame_evaluations = evaluations.load();
    return result;
}

double derivative_commutation_residual(const RadialPtr& profile, const Vec& x, const Vec& xi, double s, double h,
                                       std::optional<Vec> direction) {
    if (!profile) throw DomainError("missing profile");
    const int N = static_cast<int>(x.size());
    Vec d = direction.value_or(unit(N, N - 1));
    if (!(d.norm() > 0.0)) throw DomainError("direction must be nonzero");
    d /= d.norm();
    const Tolerance tight{1e-13, 1e-12, 10'000'000};
    const double up = directional_at(*profile, x + h * d, xi, s, tight).value;
    const double down = directional_at(*profile, x - h * d, xi, s, tight).value;
    const RadialDerivative dv(profile, d);
    const double exact = directional_at(dv, x, xi, s, tight).value;
    return std::abs((up - down) / (2.0 * h) - exact);
}

}  // namespace fractrunc
