#pragma once

#include <cstdint>
#include <optional>

#include "fractrunc/field.hpp"
#include "fractrunc/geometry.hpp"
#include "fractrunc/profiles.hpp"
#include "fractrunc/quad.hpp"

namespace fractrunc {

// I_ξ u(x) from a line section.  With include_Cs = false the C_s factor is
// dropped, which matches the normalisation of the constants module.
quad::QuadResult directional(const LineSection& section, double s, const quad::Tolerance& tol = {},
                             bool include_Cs = true);

// Small-τ data of the last call, useful in tests: the fitted u''-coefficient
// (half the second derivative of the symmetric sum) and the cut-off δ.
struct SmallTauFit {
    double delta = 0.0;
    double second_derivative = 0.0;
    double error = 0.0;
};
SmallTauFit small_tau_fit(const LineSection& section, double s, double target);

// ξ is normalised here; a zero vector is a DomainError.
quad::QuadResult directional_at(const Field& u, const Vec& x, const Vec& xi, double s,
                                const quad::Tolerance& tol = {}, bool include_Cs = true);

quad::QuadResult frame_sum(const Field& u, const Vec& x, const Frame& frame, double s,
                           const quad::Tolerance& tol = {}, bool include_Cs = true);

enum class RadialVariant { plus, minus_full };

// Closed-form frames for radial profiles with g and g'' convex: I_k^+ is
// attained at {x̂, completion}, I_N^- at N copies of an equiangular direction.
quad::QuadResult extremal_radial(const RadialProfile& profile, const Vec& x, double s, int k, RadialVariant variant,
                                 const quad::Tolerance& tol = {}, bool include_Cs = true);

enum class SearchVariant { plus, minus };

struct SearchBudget {
    int restarts = 10;
    int sweeps = 3;
    int angles = 32;
    std::uint64_t seed = 42;
    long long max_frame_evaluations = 200'000;
    int threads = 0;  // 0: hardware concurrency
    // Tolerance used inside the search; the winner is re-evaluated at the
    // caller's tolerance.
    quad::Tolerance search_tol{1e-8, 1e-7, 10'000'000};
};

struct SearchResult {
    quad::QuadResult value;
    Frame frame;
    bool budget_exhausted = false;
    long long frame_evaluations = 0;
};

// Heuristic: the value is an upper bound for the infimum (minus) and a lower
// bound for the supremum (plus), never a certified extremum.
SearchResult extremal_search(const Field& u, const Vec& x, double s, int k, SearchVariant variant,
                             const SearchBudget& budget = {}, const quad::Tolerance& tol = {},
                             bool include_Cs = true);

// |(I_ξ v(x + h d) - I_ξ v(x - h d))/(2h) - I_ξ(∂_d v)(x)|, d = e_N by default.
double derivative_commutation_residual(const RadialPtr& profile, const Vec& x, const Vec& xi, double s, double h,
                                       std::optional<Vec> direction = std::nullopt);

}  // namespace fractrunc
