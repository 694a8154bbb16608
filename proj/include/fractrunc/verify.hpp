#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fractrunc/operators.hpp"
#include "fractrunc/profiles.hpp"

namespace fractrunc {

enum class Verdict { pass, fail, inconclusive };
std::string verdict_name(Verdict v);

// One checked claim of the form "value ≤ 0".  `error` bounds the numerical
// uncertainty of `value`.
struct Residual {
    Vec point;
    std::string label;
    double value = 0.0;
    double error = 0.0;
    bool counted = true;  // false for samples reported but outside the claim's region
};

struct VerificationReport {
    std::string construction;
    nlohmann::json params = nlohmann::json::object();
    std::vector<Residual> residuals;
    double max_violation = 0.0;
    Verdict verdict = Verdict::pass;
    int refinements = 0;
    nlohmann::json extra = nlohmann::json::object();

    // fail if some counted residual exceeds 0 beyond its error bar,
    // inconclusive if some error bar straddles 0, pass otherwise.
    void finalize();
    nlohmann::json to_json() const;
};

struct VerifyOptions {
    quad::Tolerance tol{1e-10, 1e-9, 10'000'000};
    std::uint64_t seed = 42;
    int threads = 0;
    bool refine_inconclusive = true;
};

// Sample grids: log-spaced radii times directions in the open upper half-space.
std::vector<Vec> halfspace_samples(int N, double r_min, double r_max, int n_radii, int n_dirs);

VerificationReport verify_power_identity(double mu, double s, const Vec& xi, const std::vector<Vec>& points,
                                         const VerifyOptions& opt = {});

double epsilon_threshold(double s, double p);

// eps empty: use epsilon_threshold.  k < N is required (Case 2 uses the
// directions e_1..e_k orthogonal to e_N).
VerificationReport verify_bump_train(double s, double p, std::optional<double> eps, int N = 2, int k = 1,
                                     std::vector<double> slab_points = {}, const VerifyOptions& opt = {});

VerificationReport verify_T49_2(int N, double s, double gamma, const std::vector<Vec>& points = {},
                                const VerifyOptions& opt = {});

// N = 0 picks max(k, 2).  radii empty: 8 log-spaced radii in [2, 1e4].
VerificationReport verify_psi_subsolution(PsiKind kind, int k, double s, std::vector<double> radii = {}, int N = 0,
                                          std::optional<double> gamma = std::nullopt, const VerifyOptions& opt = {});

VerificationReport verify_singular_supersolution(double s, double p, SingularOp op, int N,
                                                 std::vector<double> heights = {}, int frames = 100,
                                                 const VerifyOptions& opt = {});

VerificationReport verify_avoidance_example(int N, double s, double r, const Vec& y, const std::vector<Vec>& points = {},
                                            const VerifyOptions& opt = {});

// Checks I_ξ v ≤ β v^{(β-1)/β} I_ξ(v^{1/β}) for v = power_transform(base, p, q)
// at the points along `directions` (default e_N), the scalar inequality
// b - a ≤ β a^{(β-1)/β}(b^{1/β} - a^{1/β}) on `triples` random samples, and,
// when the base is a singular power profile, I_{e_N} v + v^q ≤ 0.
VerificationReport verify_transform(double s, double p, double q, const FieldPtr& base, const std::vector<Vec>& points,
                                    std::vector<Vec> directions = {}, int triples = 10'000,
                                    const VerifyOptions& opt = {});

}  // namespace fractrunc
