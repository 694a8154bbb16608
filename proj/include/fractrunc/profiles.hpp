#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fractrunc/field.hpp"

namespace fractrunc {

// Taylor coefficients of φ(r) = r^{-γ/2} at r = junction_r2, through third
// order, in powers of (r - junction_r2).
std::array<double, 4> make_cap(double gamma, double junction_r2);

// Radial function x ↦ g(|x|²): a cubic cap for |x|² < junction_r2 glued C³ to
// the tail r^{-γ/2} (decay) or -r^{γ/2} (growth).
class RadialProfile : public Field {
public:
    enum class Orientation { decay, growth };

    RadialProfile(double gamma, double junction_r2, Orientation orientation, std::string name);

    double gamma() const { return gamma_; }
    double junction_r2() const { return junction_r2_; }
    const std::array<double, 4>& cap_coeffs() const { return cap_; }
    double tail_exponent() const { return orientation_ == Orientation::decay ? -gamma_ : gamma_; }
    Orientation orientation() const { return orientation_; }

    // g and its derivatives in r = |x|².
    double g(double r) const;
    double dg(double r) const;
    double d2g(double r) const;
    double d3g(double r) const;

    // Throws InvariantViolation when a structural condition fails on the grid.
    void validate() const;

    double value(const Vec& x) const override { return g(x.squaredNorm()); }
    std::vector<Surface> surfaces(int N) const override;
    double growth_alpha() const override { return orientation_ == Orientation::growth ? gamma_ : 0.0; }
    double smooth_scale(const Vec& x) const override;
    LineSection section(const Vec& x, const Vec& xi) const override;
    std::string kind() const override { return name_; }
    nlohmann::json params() const override;

private:
    double tail(double r, int derivative) const;

    double gamma_;
    double junction_r2_;
    Orientation orientation_;
    std::string name_;
    std::array<double, 4> cap_{};
};

using RadialPtr = std::shared_ptr<const RadialProfile>;

RadialPtr make_w_gamma(double gamma);
RadialPtr make_v_gamma(double gamma);
RadialPtr make_v_minus_gamma(double gamma, double s);

// y ↦ ⟨∇v(y), d⟩ for a radial profile v.
class RadialDerivative : public Field {
public:
    RadialDerivative(RadialPtr profile, Vec direction);
    double value(const Vec& x) const override;
    std::vector<Surface> surfaces(int N) const override;
    double growth_alpha() const override;
    double smooth_scale(const Vec& x) const override { return profile_->smooth_scale(x); }
    LineSection section(const Vec& x, const Vec& xi) const override;
    std::string kind() const override { return "radial_derivative"; }
    nlohmann::json params() const override;

private:
    RadialPtr profile_;
    Vec d_;
};

enum class PsiKind { decay, halfint, growth };

// ψ(y) = -Σ_i weight_i · ∂_{y_N} v_i(y), the half-space subsolution built from
// x_N-derivatives of radial profiles.
class PsiField : public Field {
public:
    struct Term {
        double weight;
        RadialPtr profile;
    };

    PsiField(PsiKind kind, int k, double s, double gamma_bar, double gamma, std::vector<Term> terms);

    PsiKind psi_kind() const { return kind_; }
    int k() const { return k_; }
    double s() const { return s_; }
    double gamma_bar() const { return gamma_bar_; }
    double gamma() const { return gamma_; }
    const std::vector<Term>& terms() const { return terms_; }

    double value(const Vec& x) const override;
    std::vector<Surface> surfaces(int N) const override;
    double smooth_scale(const Vec& x) const override;
    LineSection section(const Vec& x, const Vec& xi) const override;
    std::string kind() const override;
    nlohmann::json params() const override;

private:
    PsiKind kind_;
    int k_;
    double s_;
    double gamma_bar_;
    double gamma_;
    std::vector<Term> terms_;
};

using PsiPtr = std::shared_ptr<const PsiField>;

// gamma overrides the default free exponent when given.
PsiPtr make_psi(PsiKind kind, int k, double s, std::optional<double> gamma = std::nullopt);

// u_ε(x) = Σ_{n≥0} (ε² - (x_N - n - ε)²)_+^s.
class BumpTrain : public Field {
public:
    BumpTrain(double eps, double s, int window);

    double eps() const { return eps_; }
    double s() const { return s_; }
    int window() const { return window_; }

    double value(const Vec& x) const override { return along(x(x.size() - 1)); }
    double along(double t) const;
    std::vector<Surface> surfaces(int N) const override;
    double smooth_scale(const Vec& x) const override;
    LineSection section(const Vec& x, const Vec& xi) const override;
    std::string kind() const override { return "bump_train"; }
    nlohmann::json params() const override;

private:
    double eps_;
    double s_;
    int window_;
};

std::shared_ptr<const BumpTrain> make_bump_train(double eps, double s, int window = 8);

// y ↦ v_γ(y + shift·e_N) on {y_N > -shift}, 0 elsewhere.
class HalfSpacePowerTail : public Field {
public:
    HalfSpacePowerTail(double gamma, double shift);

    double gamma() const { return profile_.gamma(); }
    double shift() const { return shift_; }
    const RadialProfile& profile() const { return profile_; }

    double value(const Vec& x) const override;
    std::vector<Surface> surfaces(int N) const override;
    double smooth_scale(const Vec& x) const override;
    LineSection section(const Vec& x, const Vec& xi) const override;
    std::string kind() const override { return "halfspace_power_tail"; }
    nlohmann::json params() const override;

private:
    RadialProfile profile_;
    double shift_;
};

std::shared_ptr<const HalfSpacePowerTail> make_halfspace_power_tail(double gamma, double shift = 0.0);

// y ↦ coef·(y_N)_+^μ.
class PowerProfile : public Field {
public:
    PowerProfile(double mu, double coef, std::string name);

    double mu() const { return mu_; }
    double coef() const { return coef_; }

    double value(const Vec& x) const override;
    std::vector<Surface> surfaces(int N) const override;
    double growth_alpha() const override { return mu_; }
    double smooth_scale(const Vec& x) const override;
    LineSection section(const Vec& x, const Vec& xi) const override;
    std::string kind() const override { return name_; }
    nlohmann::json params() const override;

private:
    double mu_;
    double coef_;
    std::string name_;
};

std::shared_ptr<const PowerProfile> make_power_profile(double mu);

// scale · min{a, b}.
class MinComposition : public Field {
public:
    MinComposition(FieldPtr a, FieldPtr b, double scale);

    double value(const Vec& x) const override;
    std::vector<Surface> surfaces(int N) const override;
    double growth_alpha() const override;
    double smooth_scale(const Vec& x) const override;
    LineSection section(const Vec& x, const Vec& xi) const override;
    std::string kind() const override { return "min_composition"; }
    nlohmann::json params() const override;

    const FieldPtr& first() const { return a_; }
    const FieldPtr& second() const { return b_; }
    double scale() const { return scale_; }

private:
    FieldPtr a_, b_;
    double scale_;
};

struct ThinSupersolution {
    std::shared_ptr<const MinComposition> u;
    double alpha, beta, eps, gamma, mu, R, gamma_plus;
};

ThinSupersolution build_thIN_supersolution(int N, double s, double p, std::optional<double> mu = std::nullopt);

enum class SingularOp { ik_minus, in_plus };

struct SingularSupersolution {
    std::shared_ptr<const PowerProfile> u;
    double M, mu;
};

SingularSupersolution build_singular_supersolution(double s, double p, SingularOp op, int N);

struct TransformParams {
    double p, q;
    double beta_exp;
    double alpha_coef;

    TransformParams(double p, double q);
};

// v = α u^β.
class PowerTransform : public Field {
public:
    PowerTransform(FieldPtr base, TransformParams params);

    const TransformParams& transform() const { return t_; }
    const FieldPtr& base() const { return base_; }

    double value(const Vec& x) const override;
    std::vector<Surface> surfaces(int N) const override;
    double growth_alpha() const override { return t_.beta_exp * base_->growth_alpha(); }
    double smooth_scale(const Vec& x) const override { return base_->smooth_scale(x); }
    LineSection section(const Vec& x, const Vec& xi) const override;
    std::string kind() const override { return "power_transform"; }
    nlohmann::json params() const override;

private:
    FieldPtr base_;
    TransformParams t_;
};

std::shared_ptr<const PowerTransform> power_transform(FieldPtr base, double p, double q);

// Hurwitz zeta ζ(p, a) = Σ_{n≥0} (n+a)^{-p}, p > 1, a > 0.
double hurwitz_zeta(double p, double a);

}  // namespace fractrunc
