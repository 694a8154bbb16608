#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fractrunc/errors.hpp"
#include "fractrunc/verify.hpp"

using namespace fractrunc;

TEST_CASE("verdict rules") {
    VerificationReport r;
    r.residuals.push_back({Vec::Zero(2), "a", -1.0, 0.1});
    r.finalize();
    CHECK(r.verdict == Verdict::pass);
    r.residuals.push_back({Vec::Zero(2), "b", 0.05, 0.1});
    r.finalize();
    CHECK(r.verdict == Verdict::inconclusive);
    r.residuals.push_back({Vec::Zero(2), "c", 5.0, 0.1, false});
    r.finalize();
    CHECK(r.verdict == Verdict::inconclusive);
    r.residuals.push_back({Vec::Zero(2), "d", 0.5, 0.1});
    r.finalize();
    CHECK(r.verdict == Verdict::fail);
    CHECK(r.max_violation == doctest::Approx(0.5));
    const auto j = r.to_json();
    CHECK(j["verdict"] == "fail");
    CHECK(j["residuals"].size() == 4);
}

TEST_CASE("sample grids stay in the open upper half-space") {
    auto pts = halfspace_samples(3, 1.0, 100.0, 5, 7);
    CHECK(pts.size() == 35);
    for (const auto& p : pts) {
        CHECK(p(2) > 0.0);
        CHECK(p.norm() >= 1.0 - 1e-12);
        CHECK(p.norm() <= 100.0 + 1e-9);
    }
}

TEST_CASE("power identity") {
    Vec xi(2);
    xi << 0.6, 0.8;
    auto rep = verify_power_identity(0.3, 0.5, xi, halfspace_samples(2, 0.5, 20.0, 4, 3));
    CHECK(rep.verdict == Verdict::pass);
}

TEST_CASE("bump train supersolution") {
    auto rep = verify_bump_train(0.3, 2.0, std::nullopt);
    CHECK(rep.verdict == Verdict::pass);
    const double eps = epsilon_threshold(0.3, 2.0);
    CHECK(eps > 0.0);
    CHECK(eps < 0.5);
    CHECK_THROWS_AS(verify_bump_train(0.3, 2.0, std::nullopt, 2, 2), DomainError);
}

TEST_CASE("singular supersolution cancels exactly for the minimal operator") {
    auto rep = verify_singular_supersolution(0.5, -3.0, SingularOp::ik_minus, 2, {}, 10);
    CHECK(rep.verdict == Verdict::pass);
    CHECK(rep.extra["max_abs_residual"].get<double>() < 1e-6);
}

TEST_CASE("avoidance example") {
    Vec y(2);
    y << 0.0, -3.0;
    auto rep = verify_avoidance_example(2, 0.5, 1.0, y);
    CHECK(rep.verdict == Verdict::pass);
    Vec bad(2);
    bad << 0.0, -1.0;
    CHECK_THROWS_AS(verify_avoidance_example(2, 0.5, 1.0, bad), GeometryViolation);
}

TEST_CASE("fixed seed gives identical reports") {
    auto a = verify_psi_subsolution(PsiKind::halfint, 1, 0.5, {4.0, 16.0});
    auto b = verify_psi_subsolution(PsiKind::halfint, 1, 0.5, {4.0, 16.0});
    CHECK(a.to_json() == b.to_json());
}
