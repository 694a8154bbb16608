#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fractrunc/errors.hpp"
#include "fractrunc/quad.hpp"
#include "fractrunc/roots.hpp"
#include "oracle.hpp"

using namespace fractrunc;
using quad::Integrand;

TEST_CASE("smooth integrand on a finite interval") {
    Integrand f;
    f.eval = [](double x) { return std::cos(x); };
    auto r = quad::integrate(f, 0.0, 2.0);
    CHECK(r.value == doctest::Approx(std::sin(2.0)).epsilon(1e-13));
    CHECK(r.abs_error_estimate < 1e-9);
}

TEST_CASE("endpoint power singularities") {
    for (double e : {-0.5, -0.9, -0.999, 0.3}) {
        Integrand f;
        f.eval = [e](double x) { return std::pow(x, e); };
        f.singular_points.push_back({0.0, e, {}});
        auto r = quad::integrate(f, 0.0, 1.0, {1e-12, 1e-11});
        CHECK(r.value == doctest::Approx(1.0 / (1.0 + e)).epsilon(1e-9));
    }
}

TEST_CASE("interior kink and algebraic tail") {
    Integrand f;
    f.eval = [](double x) { return std::sqrt(std::abs(x - 1.0)) / (1.0 + x * x * x); };
    f.singular_points.push_back({1.0, 0.5, {}});
    f.tail_decay = 2.5;
    auto r = quad::integrate(f, 0.0, quad::infinity, {1e-11, 1e-10});
    oracle::Fn g = [](oracle::LD x) { return std::sqrt(std::fabs(x - 1)) / (1 + x * x * x); };
    const double ref = static_cast<double>(oracle::finite(g, 0, 1) + oracle::finite(g, 1, 2) + oracle::half_line(g, 2));
    CHECK(r.value == doctest::Approx(ref).epsilon(1e-10));
    CHECK(r.abs_error_estimate < 1e-8);
}

TEST_CASE("principal value of 1/x type integrands") {
    // PV ∫_{-1}^{1} e^x / x dx = 2 Shi(1)
    Integrand f;
    f.eval = [](double x) { return std::exp(x) / x; };
    f.pv_points.push_back({0.0, [](double h) { return 2.0 * std::sinh(h) / h; }, 0.0});
    auto r = quad::integrate_pv(f, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(2.0 * 1.0572508753757285).epsilon(1e-12));
}

TEST_CASE("non-cancelling principal value is rejected") {
    Integrand f;
    f.eval = [](double x) { return 1.0 / std::abs(x); };
    f.pv_points.push_back({0.0, {}, -1.0});
    CHECK_THROWS_AS(quad::integrate_pv(f, 0.0, 1.0), NonCancelling);
}

TEST_CASE("input validation") {
    Integrand f;
    f.eval = [](double x) { return x; };
    CHECK_THROWS_AS(quad::integrate(f, 0.0, quad::infinity), NonIntegrable);
    CHECK_THROWS_AS(quad::integrate(f, 1.0, 0.0), DomainError);
    f.singular_points.push_back({0.5, -1.0, {}});
    CHECK_THROWS_AS(quad::integrate(f, 0.0, 1.0), NonIntegrable);
    CHECK(quad::integrate(Integrand{[](double) { return 1.0; }, {}, {}, 0.0, {}}, 2.0, 2.0).value == 0.0);
}

TEST_CASE("evaluation budget") {
    Integrand f;
    f.eval = [](double x) { return std::sin(1.0 / x); };
    CHECK_THROWS_AS(quad::integrate(f, 1e-6, 1.0, {1e-15, 1e-15, 2000}), BudgetExceeded);
}

TEST_CASE("bracketed root") {
    auto f = [](double x) { return std::cos(x) - x; };
    auto r = bracketed_root(f, 0.0, 1.0, f(0.0), f(1.0));
    CHECK(r.root == doctest::Approx(0.7390851332151607).epsilon(1e-10));
    CHECK(r.bracket.first <= r.root);
    CHECK(r.bracket.second >= r.root);
    CHECK_THROWS_AS(bracketed_root(f, 0.0, 0.5, f(0.0), f(0.5)), BracketFailure);
}
