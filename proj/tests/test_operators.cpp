#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fractrunc/constants.hpp"
#include "fractrunc/errors.hpp"
#include "fractrunc/geometry.hpp"
#include "fractrunc/operators.hpp"
#include "fractrunc/profiles.hpp"
#include "oracle.hpp"

using namespace fractrunc;

namespace {
const quad::Tolerance tight{1e-12, 1e-11, 10'000'000};

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_CASE("Gaussian section at its peak") {
    // ∫_0^∞ (2e^{-τ²} - 2) τ^{-1-2s} dτ = Γ(-s).
    for (double s : {0.1, 0.5, 0.9}) {
        LineSection sec;
        sec.eval = [](double t) { return std::exp(-t * t); };
        auto r = directional(sec, s, tight, false);
        CHECK(r.value == doctest::Approx(std::tgamma(-s)).epsilon(1e-9));
        auto fit = small_tau_fit(sec, s, 1e-12);
        CHECK(fit.second_derivative == doctest::Approx(-2.0).epsilon(1e-6));
    }
}

TEST_CASE("unit bump along its own line") {
    for (double s : {0.25, 0.5, 0.75})
        for (double t : {0.0, 0.5}) {
            LineSection sec;
            sec.eval = [t, s](double tau) {
                const double y = t + tau;
                return y > -1.0 && y < 1.0 ? std::pow((1.0 - y) * (1.0 + y), s) : 0.0;
            };
            sec.c2_window = 1.0 - t;
            sec.discontinuities = {{-1.0 - t, s}, {1.0 - t, s}};
            auto r = directional(sec, s, tight, false);
            CHECK(r.value == doctest::Approx(-oracle::bump_identity(s)).epsilon(1e-8));
        }
}

TEST_CASE("constant sections vanish") {
    LineSection sec;
    sec.eval = [](double) { return 3.0; };
    sec.constant = true;
    CHECK(directional(sec, 0.4).value == 0.0);
}

TEST_CASE("radial power tail along lines that miss the cap") {
    const double g = 0.8, s = 0.4;
    auto w = make_w_gamma(g);
    const Vec x = vec2(0.0, 2.0);
    const double scale = std::pow(2.0, -g - 2.0 * s) * oracle::Cs(s);
    CHECK(directional_at(*w, x, vec2(1, 0), s, tight).value ==
          doctest::Approx(scale * oracle::c_perp(g, s)).epsilon(1e-8));
    // ⟨x̂, ξ⟩ = 1/√2: the line passes at distance √2 from the origin.
    CHECK(directional_at(*w, x, vec2(1, 1), s, tight).value ==
          doctest::Approx(scale * oracle::radial_power_directional(g, s, std::sqrt(0.5))).epsilon(1e-8));
}

TEST_CASE("power profile scales with the direction") {
    for (double s : {0.3, 0.7}) {
        const double mu = 0.6 * s;
        auto u = make_power_profile(mu);
        const double h = 1.7;
        Vec x(3);
        x << 0.4, -1.0, h;
        const double base = oracle::Cs(s) * oracle::c_s_mu(mu, s) * std::pow(h, mu - 2.0 * s);
        Vec eN = unit(3, 2);
        CHECK(directional_at(*u, x, eN, s, tight).value == doctest::Approx(base).epsilon(1e-8));
        Vec xi(3);
        xi << 0.6, 0.0, 0.8;
        CHECK(directional_at(*u, x, xi, s, tight).value == doctest::Approx(std::pow(0.8, 2 * s) * base).epsilon(1e-8));
        Vec flat(3);
        flat << 1.0, 1.0, 0.0;
        CHECK(std::abs(directional_at(*u, x, flat, s).value) < 1e-12);
    }
}

TEST_CASE("frame sums and the closed-form extremal frames") {
    const double s = 0.5, g = 1.2;
    auto w = make_w_gamma(g);
    Vec x(3);
    x << 1.0, -1.0, 1.2;
    auto plus = extremal_radial(*w, x, s, 2, RadialVariant::plus);
    auto minus = extremal_radial(*w, x, s, 3, RadialVariant::minus_full);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        CHECK(frame_sum(*w, x, random_frame(3, 2, rng), s).value <= plus.value + 1e-8);
        CHECK(frame_sum(*w, x, random_frame(3, 3, rng), s).value >= minus.value - 1e-8);
    }
    CHECK_THROWS_AS(extremal_radial(*w, x, s, 2, RadialVariant::minus_full), DomainError);
    CHECK_THROWS_AS(directional_at(*w, x, Vec::Zero(3), s), DomainError);
}

TEST_CASE("search reproduces the closed form") {
    const double s = 0.5;
    auto w = make_w_gamma(1.0);
    Vec x(3);
    x << 0.0, 2.0 * std::sqrt(0.5), 2.0 * std::sqrt(0.5);
    SearchBudget b;
    b.restarts = 4;
    auto sp = extremal_search(*w, x, s, 2, SearchVariant::plus, b);
    auto cp = extremal_radial(*w, x, s, 2, RadialVariant::plus);
    CHECK(sp.value.value == doctest::Approx(cp.value).epsilon(1e-4));
    CHECK(sp.frame.orthonormality_defect() < 1e-12);
    auto sm = extremal_search(*w, x, s, 3, SearchVariant::minus, b);
    auto cm = extremal_radial(*w, x, s, 3, RadialVariant::minus_full);
    CHECK(sm.value.value == doctest::Approx(cm.value).epsilon(1e-4));
}

TEST_CASE("search is reproducible for a fixed seed") {
    auto w = make_w_gamma(0.7);
    Vec x(2);
    x << 0.3, 1.5;
    SearchBudget b;
    b.restarts = 3;
    b.threads = 2;
    auto a = extremal_search(*w, x, 0.4, 1, SearchVariant::minus, b);
    b.threads = 1;
    auto c = extremal_search(*w, x, 0.4, 1, SearchVariant::minus, b);
    CHECK(a.value.value == c.value.value);
}

TEST_CASE("derivative commutes with the directional operator") {
    auto v = make_v_gamma(0.5);
    Vec x(2);
    x << 0.7, 1.9;
    Vec xi(2);
    xi << 0.6, 0.8;
    CHECK(derivative_commutation_residual(v, x, xi, 0.25, 1e-3) < 1e-4);
}
