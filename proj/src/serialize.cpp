#include "fractrunc/serialize.hpp"

#include "fractrunc/errors.hpp"
#include "fractrunc/profiles.hpp"

namespace fractrunc {

using nlohmann::json;

namespace {

json vec_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Vec json_vec(const json& a) {
    if (!a.is_array() || a.empty()) throw DomainError("expected a non-empty numeric array");
    Vec v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
    return v;
}

double num(const json& p, const char* key) {
    if (!p.contains(key) || !p[key].is_number()) throw DomainError(std::string("missing numeric parameter '") + key + "'");
    return p[key].get<double>();
}

RadialPtr radial_from(const std::string& kind, const json& p) {
    const std::string orient = p.value("orientation", kind == "v_minus_gamma" ? "growth" : "decay");
    auto o = orient == "growth" ? RadialProfile::Orientation::growth : RadialProfile::Orientation::decay;
    auto r = std::make_shared<RadialProfile>(num(p, "gamma"), num(p, "junction_r2"), o, kind);
    r->validate();
    return r;
}

}  // namespace

json surface_to_json(const Surface& s) {
    if (s.kind == Surface::Kind::hyperplane)
        return {{"type", "hyperplane"}, {"normal", vec_json(s.normal)}, {"offset", s.offset}, {"exponent", s.exponent}};
    return {{"type", "sphere"}, {"center", vec_json(s.center)}, {"radius", s.radius}, {"exponent", s.exponent}};
}

json field_to_json(const Field& u, int N) {
    json surfaces = json::array();
    for (const auto& s : u.surfaces(N)) surfaces.push_back(surface_to_json(s));
    return {{"schema", 1},
            {"kind", u.kind()},
            {"params", u.params()},
            {"metadata", {{"N", N}, {"growth_alpha", u.growth_alpha()}, {"surfaces", surfaces}}}};
}

FieldPtr field_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
        throw DomainError("field document needs a string 'kind'");
    if (doc.contains("schema") && doc["schema"] != 1) throw DomainError("unsupported field schema version");
    const std::string kind = doc["kind"].get<std::string>();
    const json p = doc.value("params", json::object());

    if (kind == "w_gamma" || kind == "v_gamma" || kind == "v_minus_gamma") return radial_from(kind, p);
    if (kind == "radial_derivative") {
        auto prof = radial_from(p.at("profile").get<std::string>(), p.at("profile_params"));
        return std::make_shared<RadialDerivative>(prof, json_vec(p.at("direction")));
    }
    if (kind == "psi_decay" || kind == "psi_halfint" || kind == "psi_growth") {
        const PsiKind pk = kind == "psi_decay" ? PsiKind::decay : (kind == "psi_halfint" ? PsiKind::halfint : PsiKind::growth);
        return make_psi(pk, static_cast<int>(num(p, "k")), num(p, "s"), num(p, "gamma"));
    }
    if (kind == "bump_train") return make_bump_train(num(p, "eps"), num(p, "s"), static_cast<int>(num(p, "window")));
    if (kind == "halfspace_power_tail") return make_halfspace_power_tail(num(p, "gamma"), p.value("shift", 0.0));
    if (kind == "power_profile" || kind == "singular_power")
        return std::make_shared<PowerProfile>(num(p, "mu"), p.value("coef", 1.0), kind);
    if (kind == "min_composition")
        return std::make_shared<MinComposition>(field_from_json(p.at("first")), field_from_json(p.at("second")),
                                                num(p, "scale"));
    if (kind == "power_transform")
        return power_transform(field_from_json(p.at("base")), num(p, "p"), num(p, "q"));
    throw DomainError("unknown field kind '" + kind + "'");
}

}  // namespace fractrunc
