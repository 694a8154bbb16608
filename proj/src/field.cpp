#include "fractrunc/field.hpp"

#include <algorithm>
#include <cmath>

#include "fractrunc/errors.hpp"

namespace fractrunc {

Surface Surface::hyperplane(Vec normal, double offset, double exponent) {
    Surface s;
    s.kind = Kind::hyperplane;
    s.normal = std::move(normal);
    s.offset = offset;
    s.exponent = exponent;
    return s;
}

Surface Surface::sphere(Vec center, double radius, double exponent) {
    Surface s;
    s.kind = Kind::sphere;
    s.center = std::move(center);
    s.radius = radius;
    s.exponent = exponent;
    return s;
}

std::vector<Breakpoint> line_breakpoints(const std::vector<Surface>& surfaces, const Vec& x, const Vec& xi) {
    std::vector<Breakpoint> out;
    const double a = xi.squaredNorm();
    for (const auto& s : surfaces) {
        if (s.kind == Surface::Kind::hyperplane) {
            const double d = s.normal.dot(xi);
            if (std::abs(d) > 1e-15) out.push_back({(s.offset - s.normal.dot(x)) / d, s.exponent});
            continue;
        }
        const Vec w = x - s.center;
        const double b = w.dot(xi);
        const double c = w.squaredNorm() - s.radius * s.radius;
        const double disc = b * b - a * c;
        if (disc < 0.0) continue;
        if (disc == 0.0) {
            out.push_back({-b / a, s.exponent});
            continue;
        }
        // Stable pair of roots of aτ² + 2bτ + c.
        const double q = -(b + std::copysign(std::sqrt(disc), b));
        const double r1 = q / a;
        const double r2 = (q != 0.0) ? c / q : -r1;
        out.push_back({std::min(r1, r2), s.exponent});
        out.push_back({std::max(r1, r2), s.exponent});
    }
    std::sort(out.begin(), out.end(), [](const Breakpoint& p, const Breakpoint& q) { return p.tau < q.tau; });
    return out;
}

double Field::smooth_scale(const Vec& x) const { return std::max(1.0, x.norm()); }

LineSection Field::finish_section(std::function<double(double)> eval, const Vec& x, const Vec& xi) const {
    LineSection sec;
    sec.eval = std::move(eval);
    sec.growth_alpha = growth_alpha();
    const double scale = smooth_scale(x);
    double window = scale;
    const double touch = 1e-12 * std::max(1.0, x.norm());
    for (const auto& bp : line_breakpoints(surfaces(static_cast<int>(x.size())), x, xi)) {
        if (std::abs(bp.tau) <= touch) {
            // A surface through x itself is harmless when the field is C² across
            // it: the symmetric second difference only sees each side's Taylor
            // expansion.  Rougher surfaces make the operator undefined here.
            if (bp.exponent < 2.0) throw DomainError("evaluation point lies on a non-smooth surface of the field");
            continue;
        }
        window = std::min(window, std::abs(bp.tau));
        sec.discontinuities.push_back(bp);
    }
    sec.c2_window = window;
    return sec;
}

LineSection Field::section(const Vec& x, const Vec& xi) const {
    const Vec x0 = x, d = xi;
    return finish_section([this, x0, d](double t) { return value(x0 + t * d); }, x, xi);
}

}  // namespace fractrunc
