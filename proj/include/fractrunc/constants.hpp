#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fractrunc/quad.hpp"
#include "fractrunc/roots.hpp"

namespace fractrunc {

struct ProblemParams {
    double s;
    int N;
    int k;

    ProblemParams(double s, int N, int k);
};

void require_order(double s);
void require_dimension(int N);

// C_s = 4^s s Γ(1/2+s) / (√π Γ(1-s)), the usual one-dimensional
// fractional Laplacian constant.  Every exponent and root computed below is
// independent of this choice.
double normalizing_constant(double s);

// Γ(1-s)Γ(s) = π / sin(πs).
double beta_1ms_s(double s);

// All integral constants are returned without the C_s factor.
quad::QuadResult hat_c_dec(double gamma, double s, const quad::Tolerance& tol = {});
quad::QuadResult c_perp(double gamma, double s, const quad::Tolerance& tol = {});
quad::QuadResult c_k_fn(double gamma, double s, int k, const quad::Tolerance& tol = {});
quad::QuadResult hat_c_gro(double gamma, double s, const quad::Tolerance& tol = {});
quad::QuadResult c_iso(double gamma, double s, int N, const quad::Tolerance& tol = {});
quad::QuadResult c_n_plus(double gamma, double s, int N, const quad::Tolerance& tol = {});

enum class CsMuForm { primary, alternate };
quad::QuadResult c_s_mu(double mu, double s, CsMuForm form = CsMuForm::primary, const quad::Tolerance& tol = {});

// PV ∫ (|1+τ|^λ - 1)/|τ|^{1+2s} dτ for λ in (-1, 2s).  hat_c_dec and hat_c_gro
// are the two sign conventions of this one integral.
quad::QuadResult shifted_power_pv(double lambda, double s, const quad::Tolerance& tol = {});

struct RootOptions {
    quad::Tolerance quad{1e-12, 1e-11, 10'000'000};
    RootTolerance root{};
};

// Empty when c_k keeps one sign on (0,1): that happens exactly for k = 1 and
// s >= 1/2.
std::optional<RootResult> find_gamma_bar(int k, double s, const RootOptions& opt = {});
RootResult find_gamma_tilde(int N, double s, const RootOptions& opt = {});
RootResult find_gamma_plus(int N, double s, const RootOptions& opt = {});

struct ConstantsBundle {
    double s;
    int N;
    int k;
    double C_s;
    std::optional<double> gamma_bar;
    double gamma_tilde;
    double gamma_plus;
    double beta_val;

    static ConstantsBundle compute(const ProblemParams& p, const RootOptions& opt = {});
};

struct BoundCell {
    enum class Kind { exact, lower, upper, interval, minus_infinity };
    Kind kind = Kind::exact;
    double value = 0.0;  // exact / lower / upper
    double lo = 0.0;     // interval
    double hi = 0.0;

    static BoundCell exact_value(double v) { return {Kind::exact, v, 0, 0}; }
    static BoundCell lower_bound(double v) { return {Kind::lower, v, 0, 0}; }
    static BoundCell upper_bound(double v) { return {Kind::upper, v, 0, 0}; }
    static BoundCell range(double a, double b) { return {Kind::interval, 0, a, b}; }
    static BoundCell minus_inf() { return {Kind::minus_infinity, 0, 0, 0}; }

    std::string text() const;
};

struct ExponentRow {
    std::string op;  // e.g. "I_2^-"
    int k = 1;
    bool plus = false;
    BoundCell p_upper_crit;        // p^⋆
    BoundCell p_lower_crit_growth; // p_⋆ under the growth restriction u = o(|x|^{2s/(1-p)})
    BoundCell p_lower_crit;        // p_⋆
    std::optional<double> whole_space_reference;  // 1 + 2s/γ̄ for the plus rows
};

struct ExponentTable {
    int N;
    double s;
    std::vector<ExponentRow> rows;

    std::string to_csv() const;
};

ExponentTable exponent_table(int N, double s, const RootOptions& opt = {});

}  // namespace fractrunc
