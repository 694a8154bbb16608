#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "fractrunc/geometry.hpp"
#include "fractrunc/quad.hpp"

namespace fractrunc {

// Locus where a field stops being smooth.  `exponent` is the local order of
// the non-smooth part: 0 for a jump, μ for a (·)_+^μ kink, an integer m when
// only derivatives of order > m jump.
struct Surface {
    enum class Kind { hyperplane, sphere };
    Kind kind = Kind::hyperplane;
    Vec normal;         // hyperplane: ⟨normal, y⟩ = offset, normal unit
    double offset = 0.0;
    Vec center;         // sphere: |y - center| = radius
    double radius = 0.0;
    double exponent = 0.0;

    static Surface hyperplane(Vec normal, double offset, double exponent);
    static Surface sphere(Vec center, double radius, double exponent);
};

struct Breakpoint {
    double tau;
    double exponent;
};

// Exact τ-locations where the line x + τξ meets the surfaces, sorted.
std::vector<Breakpoint> line_breakpoints(const std::vector<Surface>& surfaces, const Vec& x, const Vec& xi);

struct LineSection {
    std::function<double(double)> eval;  // τ ↦ u(x + τξ)
    // Radius around τ = 0 on which the section is smooth (C² at least, and
    // analytic enough for the small-τ expansion).
    double c2_window = std::numeric_limits<double>::infinity();
    std::vector<Breakpoint> discontinuities;
    double growth_alpha = 0.0;
    bool constant = false;
    // ∫_T^∞ (u(x+τξ) + u(x-τξ)) τ^{-1-2s} dτ for fields whose far field is
    // better summed analytically than integrated; used when set, from far_start on.
    std::function<quad::QuadResult(double s, double T, const quad::Tolerance&)> far_field;
    double far_start = std::numeric_limits<double>::infinity();
};

class Field {
public:
    virtual ~Field() = default;

    virtual double value(const Vec& x) const = 0;
    virtual std::vector<Surface> surfaces(int N) const { (void)N; return {}; }
    virtual double growth_alpha() const { return 0.0; }
    // Radius of the disc around τ = 0 where every section through x is
    // analytic apart from the declared surfaces.
    virtual double smooth_scale(const Vec& x) const;
    virtual LineSection section(const Vec& x, const Vec& xi) const;

    virtual std::string kind() const = 0;
    virtual nlohmann::json params() const = 0;

protected:
    // Fills window, breakpoints and growth around an already chosen evaluator.
    LineSection finish_section(std::function<double(double)> eval, const Vec& x, const Vec& xi) const;
};

using FieldPtr = std::shared_ptr<const Field>;

}  // namespace fractrunc
