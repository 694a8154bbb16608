#include "fractrunc/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <string>

#include "fractrunc/errors.hpp"

namespace fractrunc::quad {
namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// 15-point Kronrod abscissae and weights with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

using Fn = std::function<double(double)>;

struct Segment {
    int panel;
    double t0, t1;
    double value, err, resabs;
};

struct ByError {
    bool operator()(const Segment& a, const Segment& b) const { return a.err < b.err; }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

class Engine {
public:
    explicit Engine(const Tolerance& tol) : tol_(tol) {}

    void add_panel(Fn g, double t0, double t1, int pieces = 1) {
        panels_.push_back(std::move(g));
        const int id = static_cast<int>(panels_.size()) - 1;
        const double w = (t1 - t0) / pieces;
        for (int i = 0; i < pieces; ++i) {
            const double a = t0 + i * w;
            const double b = (i + 1 == pieces) ? t1 : a + w;
            pending_.push_back({id, a, b, 0.0, 0.0, 0.0});
        }
    }

    double call(const Fn& f, double x) {
        ++evals_;
        return f(x);
    }

    long long evals() const { return evals_; }

    // Runs the global adaptive loop.  `fixed` is a value already known (tail
    // correction) and `reserved` is error budget already spent elsewhere.
    QuadResult run(double fixed, double reserved) {
        std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
        std::vector<Segment> frozen;
        double total = 0.0, total_err = 0.0;
        for (auto seg : pending_) {
            evaluate(seg);
            total += seg.value;
            total_err += seg.err;
            push(seg, heap, frozen);
        }
        int since_resum = 0;
        auto target = [&] {
            return std::max(tol_.abs_tol, tol_.rel_tol * std::abs(total + fixed)) - reserved;
        };
        while (total_err > target()) {
            if (heap.empty()) {
                throw BudgetExceeded("quadrature error " + fmt(total_err) +
                                     " cannot be reduced below the requested tolerance (roundoff limited)");
            }
            if (evals_ >= tol_.max_evals) {
                throw BudgetExceeded("quadrature evaluation budget of " + std::to_string(tol_.max_evals) +
                                     " exhausted with error " + fmt(total_err));
            }
            Segment s = heap.top();
            heap.pop();
            const double mid = 0.5 * (s.t0 + s.t1);
            Segment left{s.panel, s.t0, mid, 0, 0, 0};
            Segment right{s.panel, mid, s.t1, 0, 0, 0};
            evaluate(left);
            evaluate(right);
            total += left.value + right.value - s.value;
            total_err += left.err + right.err - s.err;
            push(left, heap, frozen);
            push(right, heap, frozen);
            if (++since_resum == 64) {
                since_resum = 0;
                auto h = heap;
                total = 0.0;
                total_err = 0.0;
                while (!h.empty()) {
                    total += h.top().value;
                    total_err += h.top().err;
                    h.pop();
                }
                for (const auto& f : frozen) {
                    total += f.value;
                    total_err += f.err;
                }
            }
        }
        return {total + fixed, std::max(total_err, 0.0) + reserved, evals_};
    }

private:
    void push(const Segment& s, std::priority_queue<Segment, std::vector<Segment>, ByError>& heap,
              std::vector<Segment>& frozen) {
        const double width = s.t1 - s.t0;
        const bool tiny = width <= 64.0 * eps * std::max({std::abs(s.t0), std::abs(s.t1), 1e-300});
        const bool at_roundoff = s.err <= 50.0 * eps * s.resabs;
        if (tiny || at_roundoff) {
            frozen.push_back(s);
        } else {
            heap.push(s);
        }
    }

    void evaluate(Segment& s) {
        const Fn& g = panels_[s.panel];
        const double c = 0.5 * (s.t0 + s.t1);
        const double half = 0.5 * (s.t1 - s.t0);
        const double fc = checked(g, c);
        double resk = fc * wgk[7];
        double resg = fc * wg[3];
        double resabs = std::abs(resk);
        for (int j = 0; j < 3; ++j) {
            const int k = 2 * j + 1;
            const double dx = half * xgk[k];
            const double f1 = checked(g, c - dx), f2 = checked(g, c + dx);
            resg += wg[j] * (f1 + f2);
            resk += wgk[k] * (f1 + f2);
            resabs += wgk[k] * (std::abs(f1) + std::abs(f2));
        }
        for (int j = 0; j < 4; ++j) {
            const int k = 2 * j;
            const double dx = half * xgk[k];
            const double f1 = checked(g, c - dx), f2 = checked(g, c + dx);
            resk += wgk[k] * (f1 + f2);
            resabs += wgk[k] * (std::abs(f1) + std::abs(f2));
        }
        s.value = resk * half;
        s.err = std::abs((resk - resg) * half);
        s.resabs = resabs * std::abs(half);
    }

    double checked(const Fn& g, double t) {
        const double v = call(g, t);
        if (!std::isfinite(v)) {
            throw NonIntegrable("integrand is not finite at a quadrature node (mapped coordinate " + fmt(t) + ")");
        }
        return v;
    }

    const Tolerance& tol_;
    long long evals_ = 0;
    std::vector<Fn> panels_;
    std::vector<Segment> pending_;
};

struct Special {
    double location;
    const SingularPoint* sing = nullptr;
    const PvPoint* pv = nullptr;
};

Fn local_eval(const Integrand& f, const SingularPoint* sp) {
    if (sp != nullptr && sp->local) return sp->local;
    const double c = sp != nullptr ? sp->location : 0.0;
    const Fn* ev = &f.eval;
    return [ev, c](double h) { return (*ev)(c + h); };
}

bool integer_exponent(double e) { return e >= 0.0 && std::abs(e - std::round(e)) < 1e-12; }

// ∫_0^L loc(dir·h) dh where loc behaves like |h|^e at h = 0.  The innermost
// sliver (0, h0) is done analytically from the power model; the rest uses the
// map h = h0·e^v, which turns |h|^e into a smooth exponential in v for any
// e > -1, so exponents close to -1 need no special treatment.
void add_singular_interval(Engine& engine, Fn loc, double L, double e, double dir, double& fixed,
                           double& reserved) {
    if (integer_exponent(e)) {
        engine.add_panel([loc, L, dir](double t) { return loc(dir * L * t) * L; }, 0.0, 1.0, 2);
        return;
    }
    const double h0 = L * 1e-12;
    const double f1 = engine.call(loc, dir * h0);
    const double f2 = engine.call(loc, dir * 2.0 * h0);
    if (!std::isfinite(f1) || !std::isfinite(f2)) {
        throw NonIntegrable("integrand is not finite next to a declared singular point");
    }
    if (e < 0.0) {
        const double a1 = f1 * std::pow(h0, -e);
        const double a2 = f2 * std::pow(2.0 * h0, -e);
        const double w = std::pow(h0, 1.0 + e) / (1.0 + e);
        fixed += a1 * w;
        reserved += std::abs(a2 - a1) * w;
    } else {
        fixed += f1 * h0;
        reserved += std::abs(f2 - f1) * h0;
    }
    const double V = std::log(L / h0);
    engine.add_panel([loc, h0, dir](double v) {
        const double h = h0 * std::exp(v);
        return loc(dir * h) * h;
    }, 0.0, V, 4);
}

void add_interval(Engine& engine, const Integrand& f, double l, double r, const SingularPoint* sl,
                  const SingularPoint* sr, double& fixed, double& reserved) {
    const double L = r - l;
    if (sl != nullptr) {
        add_singular_interval(engine, local_eval(f, sl), L, sl->exponent, 1.0, fixed, reserved);
    } else if (sr != nullptr) {
        add_singular_interval(engine, local_eval(f, sr), L, sr->exponent, -1.0, fixed, reserved);
    } else {
        const Fn* ev = &f.eval;
        engine.add_panel([ev, l, L](double t) { return (*ev)(l + L * t) * L; }, 0.0, 1.0, 2);
    }
}

Fn folded(const Integrand& f, const PvPoint& pv) {
    if (pv.paired) return pv.paired;
    const Fn* ev = &f.eval;
    const double c = pv.location;
    return [ev, c](double h) { return (*ev)(c + h) + (*ev)(c - h); };
}

void check_cancelling(const Fn& g, double halfwidth, double c) {
    const double h1 = halfwidth * 1e-4, h2 = halfwidth * 1e-10;
    const double g1 = g(h1), g2 = g(h2);
    if (!std::isfinite(g2) || !std::isfinite(g1)) {
        throw NonCancelling("symmetric sum around " + fmt(c) + " is not finite");
    }
    const double a1 = std::abs(g1) * h1, a2 = std::abs(g2) * h2;
    if (a1 > 0.0 && a2 >= 0.9 * a1) {
        throw NonCancelling("symmetric sum around " + fmt(c) + " still behaves like 1/h; principal value does not exist");
    }
}

void validate(const Integrand& f, double a, double b) {
    if (!f.eval) throw DomainError("integrand has no evaluator");
    if (std::isnan(a) || std::isnan(b) || !std::isfinite(a) || b < a) {
        throw DomainError("integration interval must satisfy finite a <= b");
    }
    for (const auto& sp : f.singular_points) {
        if (sp.exponent > -1.0) continue;
        const bool pv = std::any_of(f.pv_points.begin(), f.pv_points.end(),
                                    [&](const PvPoint& p) { return p.location == sp.location; });
        if (!pv) {
            throw NonIntegrable("singular point at " + fmt(sp.location) + " has exponent " + fmt(sp.exponent) +
                                " <= -1 and is not declared as a principal-value point");
        }
    }
    if (std::isinf(b) && !(f.tail_decay > 1.0)) {
        throw NonIntegrable("infinite interval requires tail_decay > 1, got " + fmt(f.tail_decay));
    }
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const Tolerance& tol) {
    validate(f, a, b);
    if (a == b) return {};

    std::vector<Special> pts;
    for (const auto& sp : f.singular_points) {
        if (sp.location >= a && sp.location <= b) pts.push_back({sp.location, &sp, nullptr});
    }
    for (const auto& pv : f.pv_points) {
        if (pv.location > a && pv.location < b) {
            pts.push_back({pv.location, nullptr, &pv});
        } else if (pv.location == a || pv.location == b) {
            throw DomainError("principal-value point " + fmt(pv.location) + " may not be an interval endpoint");
        }
    }
    std::sort(pts.begin(), pts.end(), [](const Special& x, const Special& y) { return x.location < y.location; });
    // Merge entries at the same location, preferring the PV description.
    std::vector<Special> merged;
    for (const auto& p : pts) {
        if (!merged.empty() && merged.back().location == p.location) {
            if (p.pv != nullptr) merged.back().pv = p.pv;
            if (p.sing != nullptr && merged.back().sing == nullptr) merged.back().sing = p.sing;
        } else {
            merged.push_back(p);
        }
    }

    Engine engine(tol);
    // Boundaries of the elementary intervals, each tagged with the singular
    // description (if any) that applies at that boundary.
    struct Node {
        double x;
        const SingularPoint* sing;
    };
    std::vector<Node> nodes;
    const SingularPoint* sa = nullptr;
    if (!merged.empty() && merged.front().location == a) sa = merged.front().sing;
    nodes.push_back({a, sa});

    double fold_fixed = 0.0, fold_reserved = 0.0;
    std::vector<Fn> folds;
    folds.reserve(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
        const auto& p = merged[i];
        if (p.location == a || p.location == b) continue;
        if (p.pv == nullptr) {
            nodes.push_back({p.location, p.sing});
            continue;
        }
        double gap = p.location - a;
        if (std::isfinite(b)) gap = std::min(gap, b - p.location);
        if (i > 0) gap = std::min(gap, p.location - merged[i - 1].location);
        if (i + 1 < merged.size()) gap = std::min(gap, merged[i + 1].location - p.location);
        const double h = 0.5 * gap;
        folds.push_back(folded(f, *p.pv));
        check_cancelling(folds.back(), h, p.location);
        add_singular_interval(engine, folds.back(), h, p.pv->fold_exponent, 1.0, fold_fixed, fold_reserved);
        nodes.push_back({p.location - h, nullptr});
        nodes.push_back({p.location + h, nullptr});
    }

    double fixed = fold_fixed, reserved = fold_reserved;
    double finite_end = b;
    if (std::isinf(b)) {
        const Node& last = nodes.back();
        const bool last_singular = last.sing != nullptr;
        double l_tail = last.x;
        if (last_singular || l_tail <= 0.0) l_tail = std::max(last.x + 1.0, 1.0);
        finite_end = l_tail;

        const double beta = f.tail_decay;
        double T = l_tail;
        double bound = 0.0;
        for (int j = 0;; ++j) {
            T *= 4.0;
            if (!std::isfinite(T) || T > 1e300) {
                throw BudgetExceeded("tail truncation point exceeds 1e300 before the remainder bound met tolerance");
            }
            if (f.tail_bound) {
                bound = f.tail_bound(T);
            } else {
                double C = 0.0;
                for (double q : {1.0, 2.0, 4.0, 8.0}) {
                    const double tau = q * T;
                    C = std::max(C, std::abs(engine.call(f.eval, tau)) * std::pow(tau, beta));
                }
                bound = C * std::pow(T, 1.0 - beta) / (beta - 1.0);
            }
            if (bound <= 0.25 * tol.abs_tol) break;
        }
        if (!f.tail_bound) fixed += engine.call(f.eval, T) * T / (beta - 1.0);
        reserved += bound;
        const double V = std::log(T / l_tail);
        const Fn* ev = &f.eval;
        engine.add_panel([ev, l_tail](double v) {
            const double tau = l_tail * std::exp(v);
            return (*ev)(tau) * tau;
        }, 0.0, V, std::max(1, static_cast<int>(std::ceil(V))));
        if (last.x < l_tail) nodes.push_back({l_tail, nullptr});
    } else {
        const SingularPoint* sb = nullptr;
        if (!merged.empty() && merged.back().location == b) sb = merged.back().sing;
        nodes.push_back({b, sb});
    }

    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double l = nodes[i].x, r = nodes[i + 1].x;
        if (!(r > l) || r > finite_end) continue;
        // A fold produces nodes c-h, c+h with nothing in between.
        bool inside_fold = false;
        for (const auto& p : merged) {
            if (p.pv != nullptr && l < p.location && r > p.location) inside_fold = true;
        }
        if (inside_fold) continue;
        const SingularPoint* sl = nodes[i].sing;
        const SingularPoint* sr = nodes[i + 1].sing;
        if (sl != nullptr && sr != nullptr) {
            const double mid = 0.5 * (l + r);
            add_interval(engine, f, l, mid, sl, nullptr, fixed, reserved);
            add_interval(engine, f, mid, r, nullptr, sr, fixed, reserved);
        } else {
            add_interval(engine, f, l, r, sl, sr, fixed, reserved);
        }
    }
    return engine.run(fixed, reserved);
}

QuadResult integrate_pv(const Integrand& f, double c, double halfwidth, const Tolerance& tol) {
    if (!(halfwidth > 0.0)) throw DomainError("halfwidth must be positive");
    const PvPoint* pv = nullptr;
    for (const auto& p : f.pv_points) {
        if (std::abs(p.location - c) <= 1e-15 * std::max(1.0, std::abs(c))) pv = &p;
    }
    if (pv == nullptr) throw DomainError("point " + fmt(c) + " is not a declared principal-value point");
    Fn g = folded(f, *pv);
    check_cancelling(g, halfwidth, c);
    Integrand h;
    h.eval = g;
    h.singular_points.push_back({0.0, pv->fold_exponent, g});
    return integrate(h, 0.0, halfwidth, tol);
}

}  // namespace fractrunc::quad
