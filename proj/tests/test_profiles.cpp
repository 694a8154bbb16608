#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fractrunc/constants.hpp"
#include "fractrunc/errors.hpp"
#include "fractrunc/operators.hpp"
#include "fractrunc/profiles.hpp"
#include "fractrunc/serialize.hpp"
#include "oracle.hpp"

using namespace fractrunc;

namespace {
Vec vec(std::initializer_list<double> v) {
    Vec x(static_cast<Eigen::Index>(v.size()));
    int i = 0;
    for (double a : v) x(i++) = a;
    return x;
}
}  // namespace

TEST_CASE("cap and tail agree to third order at the junction") {
    for (double g : {0.3, 1.0, 2.7}) {
        auto w = make_w_gamma(g);
        const double r = w->junction_r2(), lam = 0.5 * g;
        const double e = 1e-12;
        CHECK(w->g(r - e) == doctest::Approx(std::pow(r, -lam)).epsilon(1e-10));
        CHECK(w->dg(r - e) == doctest::Approx(-lam * std::pow(r, -lam - 1)).epsilon(1e-9));
        CHECK(w->d2g(r - e) == doctest::Approx(lam * (lam + 1) * std::pow(r, -lam - 2)).epsilon(1e-9));
        CHECK(w->d3g(r - e) == doctest::Approx(-lam * (lam + 1) * (lam + 2) * std::pow(r, -lam - 3)).epsilon(1e-9));
        CHECK(w->g(0.0) > w->g(r));
        CHECK_NOTHROW(w->validate());
    }
}

TEST_CASE("growth profiles") {
    auto v = make_v_minus_gamma(0.5, 0.75);
    CHECK(v->value(vec({3.0, 4.0})) == doctest::Approx(-std::pow(5.0, 0.5)));
    CHECK(v->growth_alpha() == 0.5);
    CHECK_NOTHROW(v->validate());
    CHECK_THROWS_AS(make_v_minus_gamma(0.6, 0.75), DomainError);
    CHECK_THROWS_AS(make_v_minus_gamma(0.1, 0.4), DomainError);
    CHECK_THROWS_AS(make_v_gamma(1.0), DomainError);
}

TEST_CASE("Hurwitz zeta") {
    CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-14));
    CHECK(hurwitz_zeta(3.0, 0.5) == doctest::Approx(7.0 * 1.2020569031595942).epsilon(1e-14));
    double direct = 0.0;
    for (int n = 0; n < 2000000; ++n) direct += std::pow(n + 0.3, -4.5);
    CHECK(hurwitz_zeta(4.5, 0.3) == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("bump train values") {
    auto u = make_bump_train(0.25, 0.5);
    CHECK(u->along(0.25) == doctest::Approx(0.25));
    CHECK(u->along(7.25) == doctest::Approx(0.25));
    CHECK(u->along(0.75) == 0.0);
    CHECK(u->along(-0.1) == 0.0);
    CHECK(u->along(2.1) == doctest::Approx(std::sqrt(0.0625 - 0.15 * 0.15)));
}

TEST_CASE("bump train directional operator") {
    // Reference values from 30-digit quadrature of the full train.
    const struct {
        double s, value;
    } ref[] = {{0.25, -0.701577792435}, {0.5, -0.902737087973}, {0.75, -1.29279895581}};
    for (const auto& r : ref) {
        auto u = make_bump_train(0.25, r.s);
        auto v = directional_at(*u, vec({0.0, 3.25}), vec({0.0, 1.0}), r.s, {1e-12, 1e-11});
        CHECK(v.value == doctest::Approx(r.value).epsilon(1e-10));
    }
    // Directions in the slab plane see a constant section.
    auto u = make_bump_train(0.25, 0.3);
    CHECK(directional_at(*u, vec({0.0, 1.1}), vec({1.0, 0.0}), 0.3).value == 0.0);
}

TEST_CASE("psi fields") {
    CHECK_THROWS_AS(make_psi(PsiKind::decay, 1, 0.75), NoRoot);
    CHECK_THROWS_AS(make_psi(PsiKind::halfint, 2, 0.5), DomainError);
    CHECK_THROWS_AS(make_psi(PsiKind::growth, 1, 0.5), DomainError);
    auto p = make_psi(PsiKind::decay, 2, 0.5);
    CHECK(p->gamma() > p->gamma_bar());
    // ψ vanishes on the boundary and is positive inside.
    CHECK(p->value(vec({1.0, 0.0})) == 0.0);
    CHECK(p->value(vec({1.0, 3.0})) > 0.0);
}

TEST_CASE("singular supersolution coefficient") {
    const double s = 0.5, p = -3.0;
    auto b = build_singular_supersolution(s, p, SingularOp::ik_minus, 2);
    CHECK(b.mu == doctest::Approx(2 * s / (1 - p)));
    // M^{1-p} |C_s c_{s,μ}| = 1 makes I_{e_N} u + u^p vanish identically.
    CHECK(std::pow(b.M, 1 - p) * oracle::Cs(s) * std::abs(oracle::c_s_mu(b.mu, s)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(b.u->value(vec({5.0, 1.0})) == doctest::Approx(b.M));
    CHECK_THROWS_AS(build_singular_supersolution(s, -0.5, SingularOp::ik_minus, 2), ExponentOutOfRange);
}

TEST_CASE("thin supersolution exponent range") {
    auto gp = find_gamma_plus(3, 0.5).root;
    const double pstar = 1.0 + 1.0 / gp;
    CHECK_NOTHROW(build_thIN_supersolution(3, 0.5, pstar + 0.3));
    try {
        build_thIN_supersolution(3, 0.5, pstar - 0.1);
        FAIL("expected ExponentOutOfRange");
    } catch (const ExponentOutOfRange& e) {
        CHECK(e.threshold() == doctest::Approx(pstar).epsilon(1e-8));
    }
}

TEST_CASE("transform parameters") {
    CHECK_THROWS_AS(TransformParams(2.0, 1.5), DomainError);
    CHECK_THROWS_AS(TransformParams(0.5, 2.0), DomainError);
    TransformParams id(3.0, 3.0);
    CHECK(id.beta_exp == 1.0);
    CHECK(id.alpha_coef == 1.0);
}

TEST_CASE("serialisation round trip") {
    std::vector<std::pair<FieldPtr, int>> fields = {
        {make_w_gamma(0.9), 3},
        {make_v_gamma(0.4), 2},
        {make_v_minus_gamma(0.3, 0.8), 2},
        {make_psi(PsiKind::halfint, 1, 0.5), 2},
        {make_bump_train(0.2, 0.4), 2},
        {make_halfspace_power_tail(0.7, 1.1), 3},
        {make_power_profile(0.4), 2},
        {build_thIN_supersolution(3, 0.5, 4.0).u, 3},
        {build_singular_supersolution(0.5, -3.0, SingularOp::in_plus, 2).u, 2},
        {power_transform(build_singular_supersolution(0.5, -3.0, SingularOp::ik_minus, 2).u, -3.0, -5.0), 2},
    };
    for (const auto& [u, N] : fields) {
        CAPTURE(u->kind());
        const auto doc = field_to_json(*u, N);
        CHECK(doc["schema"] == 1);
        const FieldPtr back = field_from_json(nlohmann::json::parse(doc.dump()));
        CHECK(back->kind() == u->kind());
        Vec x = Vec::Constant(N, 0.37);
        x(N - 1) = 1.3;
        CHECK(back->value(x) == u->value(x));
        CHECK(field_to_json(*back, N) == doc);
    }
    CHECK_THROWS_AS(field_from_json(nlohmann::json{{"schema", 1}, {"kind", "nope"}, {"params", {}}}), DomainError);
}
