#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fractrunc/constants.hpp"
#include "fractrunc/errors.hpp"
#include "fractrunc/operators.hpp"
#include "fractrunc/profiles.hpp"
#include "fractrunc/serialize.hpp"
#include "fractrunc/verify.hpp"

namespace py = pybind11;
using namespace fractrunc;

namespace {

py::dict quad_dict(const quad::QuadResult& r) {
    py::dict d;
    d["value"] = r.value;
    d["abs_error_estimate"] = r.abs_error_estimate;
    d["n_evals"] = r.n_evals;
    return d;
}

py::dict root_dict(const RootResult& r) {
    py::dict d;
    d["root"] = r.root;
    d["residual"] = r.residual;
    d["bracket"] = py::make_tuple(r.bracket.first, r.bracket.second);
    d["iterations"] = r.iterations;
    return d;
}

quad::Tolerance tolerance(double abs_tol, double rel_tol) { return {abs_tol, rel_tol, 10'000'000}; }

// Reports travel as JSON text; the Python side turns them into dicts.
std::string report(const VerificationReport& r) { return r.to_json().dump(); }

PsiKind psi_kind(const std::string& k) {
    if (k == "decay") return PsiKind::decay;
    if (k == "halfint") return PsiKind::halfint;
    if (k == "growth") return PsiKind::growth;
    throw DomainError("psi kind must be decay, halfint or growth");
}

SingularOp singular_op(const std::string& op) {
    if (op == "ik_minus" || op == "ik-minus") return SingularOp::ik_minus;
    if (op == "in_plus" || op == "in-plus") return SingularOp::in_plus;
    throw DomainError("op must be ik_minus or in_plus");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fractional truncated Laplacians on the half-space";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NoRoot>(m, "NoRoot", error.ptr());
    py::register_exception<ExponentOutOfRange>(m, "ExponentOutOfRange", error.ptr());
    py::register_exception<GeometryViolation>(m, "GeometryViolation", error.ptr());
    py::register_exception<HypothesisViolation>(m, "HypothesisViolation", error.ptr());
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", error.ptr());

    m.def("normalizing_constant", &normalizing_constant, py::arg("s"));

#define FR_CONST(name, ...)                                                                            \
    m.def(#name, [](double g, double s, double a, double r) { return quad_dict(name(g, s, tolerance(a, r))); }, \
          py::arg("gamma"), py::arg("s"), py::arg("abs_tol") = 1e-10, py::arg("rel_tol") = 1e-9)
    FR_CONST(hat_c_dec);
    FR_CONST(hat_c_gro);
    FR_CONST(c_perp);
#undef FR_CONST
    m.def("c_k", [](double g, double s, int k, double a, double r) { return quad_dict(c_k_fn(g, s, k, tolerance(a, r))); },
          py::arg("gamma"), py::arg("s"), py::arg("k"), py::arg("abs_tol") = 1e-10, py::arg("rel_tol") = 1e-9);
    m.def("c_iso", [](double g, double s, int N, double a, double r) { return quad_dict(c_iso(g, s, N, tolerance(a, r))); },
          py::arg("gamma"), py::arg("s"), py::arg("N"), py::arg("abs_tol") = 1e-10, py::arg("rel_tol") = 1e-9);
    m.def("c_n_plus",
          [](double g, double s, int N, double a, double r) { return quad_dict(c_n_plus(g, s, N, tolerance(a, r))); },
          py::arg("gamma"), py::arg("s"), py::arg("N"), py::arg("abs_tol") = 1e-10, py::arg("rel_tol") = 1e-9);
    m.def(
        "c_s_mu",
        [](double mu, double s, bool alternate) {
            return quad_dict(c_s_mu(mu, s, alternate ? CsMuForm::alternate : CsMuForm::primary));
        },
        py::arg("mu"), py::arg("s"), py::arg("alternate") = false);

    m.def(
        "find_gamma_bar",
        [](int k, double s) -> py::object {
            auto r = find_gamma_bar(k, s);
            if (!r) return py::none();
            return root_dict(*r);
        },
        py::arg("k"), py::arg("s"));
    m.def("find_gamma_tilde", [](int N, double s) { return root_dict(find_gamma_tilde(N, s)); }, py::arg("N"), py::arg("s"));
    m.def("find_gamma_plus", [](int N, double s) { return root_dict(find_gamma_plus(N, s)); }, py::arg("N"), py::arg("s"));
    m.def("exponent_table_csv", [](int N, double s) { return exponent_table(N, s).to_csv(); }, py::arg("N"), py::arg("s"));

    py::class_<Field, std::shared_ptr<Field>>(m, "Field")
        .def("value", &Field::value, py::arg("x"))
        .def_property_readonly("kind", &Field::kind)
        .def("to_json", [](const Field& u, int N) { return field_to_json(u, N).dump(); }, py::arg("N"))
        .def(
            "directional",
            [](const Field& u, const Vec& x, const Vec& xi, double s, double a, double r) {
                return quad_dict(directional_at(u, x, xi, s, tolerance(a, r)));
            },
            py::arg("x"), py::arg("xi"), py::arg("s"), py::arg("abs_tol") = 1e-10, py::arg("rel_tol") = 1e-9)
        .def(
            "extremal_search",
            [](const Field& u, const Vec& x, double s, int k, bool plus, int restarts, std::uint64_t seed) {
                SearchBudget b;
                b.restarts = restarts;
                b.seed = seed;
                auto res = extremal_search(u, x, s, k, plus ? SearchVariant::plus : SearchVariant::minus, b);
                py::dict d = quad_dict(res.value);
                d["frame"] = res.frame.vectors();
                d["budget_exhausted"] = res.budget_exhausted;
                return d;
            },
            py::arg("x"), py::arg("s"), py::arg("k"), py::arg("plus"), py::arg("restarts") = 10, py::arg("seed") = 42);

    // Fields are immutable once built, so handing out const objects as
    // mutable holders is safe.
    auto hold = [](auto p) { return std::const_pointer_cast<Field>(std::static_pointer_cast<const Field>(p)); };
    m.def("field_from_json", [hold](const std::string& doc) { return hold(field_from_json(nlohmann::json::parse(doc))); },
          py::arg("document"));
    m.def("w_gamma", [hold](double g) { return hold(make_w_gamma(g)); }, py::arg("gamma"));
    m.def("v_gamma", [hold](double g) { return hold(make_v_gamma(g)); }, py::arg("gamma"));
    m.def("v_minus_gamma", [hold](double g, double s) { return hold(make_v_minus_gamma(g, s)); }, py::arg("gamma"),
          py::arg("s"));
    m.def("power_profile", [hold](double mu) { return hold(make_power_profile(mu)); }, py::arg("mu"));
    m.def("bump_train", [hold](double eps, double s, int window) { return hold(make_bump_train(eps, s, window)); },
          py::arg("eps"), py::arg("s"), py::arg("window") = 8);
    m.def(
        "psi",
        [hold](const std::string& kind, int k, double s, std::optional<double> g) {
            return hold(make_psi(psi_kind(kind), k, s, g));
        },
        py::arg("kind"), py::arg("k"), py::arg("s"), py::arg("gamma") = py::none());
    m.def(
        "singular_supersolution",
        [hold](double s, double p, const std::string& op, int N) {
            auto b = build_singular_supersolution(s, p, singular_op(op), N);
            return py::make_tuple(hold(b.u), b.M, b.mu);
        },
        py::arg("s"), py::arg("p"), py::arg("op"), py::arg("N"));
    m.def(
        "power_transform",
        [hold](const std::shared_ptr<Field>& base, double p, double q) { return hold(power_transform(base, p, q)); },
        py::arg("base"), py::arg("p"), py::arg("q"));

    m.def(
        "verify_bump_train",
        [](double s, double p, std::optional<double> eps, int N, int k) {
            return report(verify_bump_train(s, p, eps, N, k));
        },
        py::arg("s"), py::arg("p"), py::arg("eps") = py::none(), py::arg("N") = 2, py::arg("k") = 1);
    m.def("verify_T49_2", [](int N, double s, double g) { return report(verify_T49_2(N, s, g)); }, py::arg("N"),
          py::arg("s"), py::arg("gamma"));
    m.def(
        "verify_psi_subsolution",
        [](const std::string& kind, int k, double s, std::vector<double> radii) {
            return report(verify_psi_subsolution(psi_kind(kind), k, s, std::move(radii)));
        },
        py::arg("kind"), py::arg("k"), py::arg("s"), py::arg("radii") = std::vector<double>{});
    m.def(
        "verify_singular_supersolution",
        [](double s, double p, const std::string& op, int N, int frames) {
            return report(verify_singular_supersolution(s, p, singular_op(op), N, {}, frames));
        },
        py::arg("s"), py::arg("p"), py::arg("op"), py::arg("N"), py::arg("frames") = 100);
    m.def(
        "verify_power_identity",
        [](double mu, double s, const Vec& xi, int n_radii, int n_dirs) {
            const int N = static_cast<int>(xi.size());
            return report(verify_power_identity(mu, s, xi, halfspace_samples(N, 0.1, 50.0, n_radii, n_dirs)));
        },
        py::arg("mu"), py::arg("s"), py::arg("xi"), py::arg("n_radii") = 6, py::arg("n_dirs") = 4);
}
