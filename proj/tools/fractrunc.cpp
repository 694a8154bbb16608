// fractrunc command-line tool.  Exit codes: 0 success or pass, 1 verification
// failure, 2 usage or domain error, 3 inconclusive verification.

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "fractrunc/constants.hpp"
#include "fractrunc/errors.hpp"
#include "fractrunc/operators.hpp"
#include "fractrunc/profiles.hpp"
#include "fractrunc/serialize.hpp"
#include "fractrunc/verify.hpp"
#include "svg.hpp"

using nlohmann::json;
using namespace fractrunc;
using fractrunc::cli::Config;

namespace {

json result_json(const quad::QuadResult& r) { return {{"value", r.value}, {"error", r.abs_error_estimate}}; }

json vec_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Vec parse_vec(const std::string& text, const std::string& what) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || !std::isfinite(v)) throw DomainError(what + " must be a comma-separated list of numbers");
        vals.push_back(v);
    }
    if (vals.empty()) throw DomainError(what + " must not be empty");
    return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::string num_text(double v) {
    std::ostringstream os;
    os.precision(15);
    os << v;
    return os.str();
}

json cell_json(const BoundCell& c) {
    json j = {{"text", c.text()}};
    switch (c.kind) {
        case BoundCell::Kind::exact: j["kind"] = "exact"; j["value"] = c.value; break;
        case BoundCell::Kind::lower: j["kind"] = "lower_bound"; j["value"] = c.value; break;
        case BoundCell::Kind::upper: j["kind"] = "upper_bound"; j["value"] = c.value; break;
        case BoundCell::Kind::interval: j["kind"] = "interval"; j["lo"] = c.lo; j["hi"] = c.hi; break;
        case BoundCell::Kind::minus_infinity: j["kind"] = "minus_infinity"; break;
    }
    return j;
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        cli::write_atomically(out, text);
    }
}

int verdict_exit(Verdict v) {
    switch (v) {
        case Verdict::pass: return 0;
        case Verdict::fail: return 1;
        case Verdict::inconclusive: return 3;
    }
    return 2;
}

RootOptions root_options(const Config& c) {
    RootOptions o;
    o.root.residual = c.root_residual;
    return o;
}

// ---------------------------------------------------------------- constants

json constants_doc(double s, int N, int k, std::optional<double> gamma, std::optional<double> mu, const Config& cfg) {
    ProblemParams pp(s, N, k);
    const quad::Tolerance tol = cfg.tolerance();
    json out = {{"s", s}, {"N", N}, {"k", k}};
    out["gamma"] = gamma ? json(*gamma) : json(nullptr);
    out["mu"] = mu ? json(*mu) : json(nullptr);
    json c = json::object();
    json notes = json::array();
    c["C_s"] = {{"value", normalizing_constant(s)}, {"error", 0.0}};
    c["beta"] = {{"value", beta_1ms_s(s)}, {"error", 0.0}};
    auto guarded = [&](const char* name, auto&& fn) {
        try {
            c[name] = result_json(fn());
        } catch (const Error& e) {
            c[name] = nullptr;
            notes.push_back(std::string(name) + ": " + e.what());
        }
    };
    if (gamma) {
        const double g = *gamma;
        // The radial constants need γ in (0,1): at γ = 1 the kernel |1+τ|^{-γ}
        // is no longer integrable at τ = -1.
        auto radial = [&](const char* name, auto&& fn) {
            if (!(g > 0.0 && g < 1.0)) {
                c[name] = nullptr;
                notes.push_back(std::string(name) + ": defined for gamma in (0,1) only");
                return;
            }
            guarded(name, fn);
        };
        radial("hat_c", [&] { return hat_c_dec(g, s, tol); });
        radial("c_perp", [&] { return c_perp(g, s, tol); });
        radial("c_k", [&] { return c_k_fn(g, s, k, tol); });
        guarded("c_iso", [&] { return c_iso(g, s, N, tol); });
        guarded("c_n_plus", [&] { return c_n_plus(g, s, N, tol); });
    }
    if (mu) guarded("c_s_mu", [&] { return c_s_mu(*mu, s, CsMuForm::primary, tol); });
    out["constants"] = c;
    out["notes"] = notes;
    return out;
}

// ---------------------------------------------------------------- roots

json roots_doc(const std::string& which, int N, int k, double s, const Config& cfg) {
    const RootOptions opt = root_options(cfg);
    json out = {{"which", which}, {"s", s}};
    auto fill = [&](const RootResult& r) {
        out["exists"] = true;
        out["root"] = r.root;
        out["residual"] = r.residual;
        out["bracket"] = {r.bracket.first, r.bracket.second};
        out["iterations"] = r.iterations;
    };
    if (which == "gamma-bar") {
        require_order(s);
        if (k < 1) throw DomainError("k must be at least 1");
        out["k"] = k;
        if (auto r = find_gamma_bar(k, s, opt)) {
            fill(*r);
        } else {
            out["exists"] = false;
            out["reason"] = "c_k keeps one sign on (0,1)";
        }
    } else if (which == "gamma-tilde") {
        out["N"] = N;
        fill(find_gamma_tilde(N, s, opt));
    } else if (which == "gamma-plus") {
        out["N"] = N;
        fill(find_gamma_plus(N, s, opt));
    } else {
        throw DomainError("which must be gamma-bar, gamma-tilde or gamma-plus");
    }
    return out;
}

// ---------------------------------------------------------------- table

json table_doc(const ExponentTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json row = {{"operator", r.op},
                    {"k", r.k},
                    {"plus", r.plus},
                    {"p_upper_crit", cell_json(r.p_upper_crit)},
                    {"p_lower_crit_growth", cell_json(r.p_lower_crit_growth)},
                    {"p_lower_crit", cell_json(r.p_lower_crit)}};
        row["whole_space_reference"] = r.whole_space_reference ? json(*r.whole_space_reference) : json(nullptr);
        rows.push_back(row);
    }
    return {{"N", t.N}, {"s", t.s}, {"rows", rows}};
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string construction;
    double s = 0.5;
    double p = 2.0;
    double q = -5.0;
    double mu = 0.25;
    double r = 1.0;
    int N = 2;
    int k = 1;
    std::string eps = "auto";
    std::string gamma = "auto";
    std::string kind = "decay";
    std::string op = "ik-minus";
    std::string y;
    std::string xi;
    std::string report;
};

VerificationReport run_verify(const VerifyArgs& a, const Config& cfg) {
    VerifyOptions opt;
    opt.tol = cfg.tolerance();
    opt.seed = static_cast<std::uint64_t>(cfg.seed);
    opt.threads = cfg.threads;
    const std::string& c = a.construction;
    if (c == "bump-train") {
        std::optional<double> eps;
        if (a.eps != "auto") eps = std::stod(a.eps);
        return verify_bump_train(a.s, a.p, eps, std::max(a.N, a.k + 1), a.k, {}, opt);
    }
    if (c == "t49-2") {
        double gamma = 0.0;
        if (a.gamma == "auto") {
            // Inside the admissible range: p = 1 + 2s/γ^+ + 0.2 and γ = 2s/(p-1).
            const double gp = find_gamma_plus(a.N, a.s, root_options(cfg)).root;
            const double p = 1.0 + 2.0 * a.s / gp + 0.2;
            gamma = 2.0 * a.s / (p - 1.0);
        } else {
            gamma = std::stod(a.gamma);
        }
        const double R = std::sqrt(static_cast<double>(a.N) / (a.N - 1));
        return verify_T49_2(a.N, a.s, gamma, halfspace_samples(a.N, 1.05 * R, 50.0, cfg.radii, cfg.dirs), opt);
    }
    if (c == "psi") {
        PsiKind kind;
        if (a.kind == "decay") kind = PsiKind::decay;
        else if (a.kind == "halfint") kind = PsiKind::halfint;
        else if (a.kind == "growth") kind = PsiKind::growth;
        else throw DomainError("kind must be decay, halfint or growth");
        std::vector<double> radii;
        for (int i = 0; i < cfg.radii; ++i)
            radii.push_back(cfg.radii == 1 ? 2.0 : 2.0 * std::pow(5000.0, static_cast<double>(i) / (cfg.radii - 1)));
        std::optional<double> gamma;
        if (a.gamma != "auto") gamma = std::stod(a.gamma);
        return verify_psi_subsolution(kind, a.k, a.s, radii, std::max(a.N, a.k), gamma, opt);
    }
    if (c == "singular") {
        SingularOp op;
        if (a.op == "ik-minus") op = SingularOp::ik_minus;
        else if (a.op == "in-plus") op = SingularOp::in_plus;
        else throw DomainError("op must be ik-minus or in-plus");
        return verify_singular_supersolution(a.s, a.p, op, a.N, {}, 100, opt);
    }
    if (c == "power-identity") {
        Vec xi = a.xi.empty() ? Vec::Ones(a.N) : parse_vec(a.xi, "xi");
        if (xi.size() != a.N) throw DomainError("xi must have N components");
        return verify_power_identity(a.mu, a.s, xi, halfspace_samples(a.N, 0.5, 4.0, cfg.radii, cfg.dirs), opt);
    }
    if (c == "avoidance") {
        Vec y;
        if (a.y.empty()) {
            y = Vec::Zero(a.N);
            y(a.N - 1) = -2.0 * a.r;
        } else {
            y = parse_vec(a.y, "y");
        }
        return verify_avoidance_example(a.N, a.s, a.r, y, halfspace_samples(a.N, 0.1, 20.0, cfg.radii, cfg.dirs), opt);
    }
    if (c == "transform") {
        const auto base = build_singular_supersolution(a.s, a.p, SingularOp::ik_minus, a.N);
        std::vector<Vec> pts;
        for (double h : {0.5, 1.0, 2.0}) {
            Vec x = Vec::Zero(a.N);
            x(a.N - 1) = h;
            pts.push_back(x);
        }
        return verify_transform(a.s, a.p, a.q, base.u, pts, {}, 10'000, opt);
    }
    throw DomainError("unknown construction '" + c +
                      "' (expected bump-train, t49-2, psi, singular, power-identity, avoidance or transform)");
}

// ---------------------------------------------------------------- sweep

struct SweepRow {
    double s;
    std::vector<std::optional<double>> values;
    std::string error;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// ---------------------------------------------------------------- profile documents

struct ProfileArgs {
    std::string kind;
    double gamma = 0.5;
    double s = 0.5;
    double mu = 0.25;
    double eps = 0.1;
    double p = 2.0;
    int k = 1;
    int N = 2;
    int window = 8;
    std::string psi_kind = "decay";
    std::string op = "ik-minus";
};

FieldPtr build_profile(const ProfileArgs& a) {
    if (a.kind == "w_gamma") return make_w_gamma(a.gamma);
    if (a.kind == "v_gamma") return make_v_gamma(a.gamma);
    if (a.kind == "v_minus_gamma") return make_v_minus_gamma(a.gamma, a.s);
    if (a.kind == "psi") {
        const PsiKind k = a.psi_kind == "decay" ? PsiKind::decay : a.psi_kind == "halfint" ? PsiKind::halfint : PsiKind::growth;
        if (a.psi_kind != "decay" && a.psi_kind != "halfint" && a.psi_kind != "growth")
            throw DomainError("psi-kind must be decay, halfint or growth");
        return make_psi(k, a.k, a.s);
    }
    if (a.kind == "bump_train") return make_bump_train(a.eps, a.s, a.window);
    if (a.kind == "halfspace_power_tail") return make_halfspace_power_tail(a.gamma);
    if (a.kind == "power_profile") return make_power_profile(a.mu);
    if (a.kind == "thin_supersolution") return build_thIN_supersolution(a.N, a.s, a.p).u;
    if (a.kind == "singular_power") {
        const SingularOp op = a.op == "in-plus" ? SingularOp::in_plus : SingularOp::ik_minus;
        return build_singular_supersolution(a.s, a.p, op, a.N).u;
    }
    throw DomainError("unknown profile kind '" + a.kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constants, critical exponents and barrier checks for truncated fractional Laplacians"};
    app.require_subcommand(1);
    app.fallthrough();  // configuration flags may follow the subcommand

    std::string config_file;
    app.add_option("--config", config_file, "key = value configuration file");
    std::map<std::string, std::string> flag_values;
    std::map<std::string, CLI::Option*> flag_opts;
    for (const char* const* k = Config::keys; *k; ++k) {
        std::string name = *k;
        std::string flag = "--" + name;
        for (auto& ch : flag)
            if (ch == '_') ch = '-';
        flag_opts[name] = app.add_option(flag, flag_values[name], "configuration override")->group("Configuration");
    }
    std::string out_path;
    app.add_option("-o,--out", out_path, "write the document here instead of stdout");

    // constants
    auto* c_cmd = app.add_subcommand("constants", "integral constants with error estimates");
    double c_s = 0.0;
    int c_N = 2, c_k = 1;
    std::optional<double> c_gamma, c_mu;
    c_cmd->add_option("--s", c_s, "order s in (0,1)")->required();
    c_cmd->add_option("--N", c_N, "dimension");
    c_cmd->add_option("--k", c_k, "frame size");
    c_cmd->add_option("--gamma", c_gamma, "exponent for the gamma-dependent constants");
    c_cmd->add_option("--mu", c_mu, "exponent for c_{s,mu}");

    // roots
    auto* r_cmd = app.add_subcommand("roots", "gamma-bar, gamma-tilde or gamma-plus");
    std::string r_which;
    double r_s = 0.0;
    int r_N = 2, r_k = 1;
    r_cmd->add_option("--which", r_which, "gamma-bar | gamma-tilde | gamma-plus")->required();
    r_cmd->add_option("--s", r_s, "order s in (0,1)")->required();
    r_cmd->add_option("--N", r_N, "dimension");
    r_cmd->add_option("--k", r_k, "frame size");

    // table
    auto* t_cmd = app.add_subcommand("table", "critical exponent table");
    int t_N = 2;
    double t_s = 0.0;
    t_cmd->add_option("--N", t_N, "dimension")->required();
    t_cmd->add_option("--s", t_s, "order s in (0,1)")->required();

    // verify
    auto* v_cmd = app.add_subcommand("verify", "check a construction; exit 0 pass, 1 fail, 3 inconclusive");
    VerifyArgs va;
    v_cmd->add_option("construction", va.construction,
                      "bump-train | t49-2 | psi | singular | power-identity | avoidance | transform")
        ->required();
    v_cmd->add_option("--s", va.s, "order s");
    v_cmd->add_option("--p", va.p, "exponent p");
    v_cmd->add_option("--q", va.q, "target exponent q (transform)");
    v_cmd->add_option("--mu", va.mu, "power (power-identity)");
    v_cmd->add_option("--r", va.r, "ball radius (avoidance)");
    v_cmd->add_option("--N", va.N, "dimension");
    v_cmd->add_option("--k", va.k, "frame size");
    v_cmd->add_option("--eps", va.eps, "bump half-width or auto");
    v_cmd->add_option("--gamma", va.gamma, "exponent or auto");
    v_cmd->add_option("--kind", va.kind, "psi kind: decay | halfint | growth");
    v_cmd->add_option("--op", va.op, "ik-minus | in-plus");
    v_cmd->add_option("--y", va.y, "ball centre, comma separated (avoidance)");
    v_cmd->add_option("--xi", va.xi, "direction, comma separated (power-identity)");
    v_cmd->add_option("--report", va.report, "write the JSON report here");

    // sweep
    auto* w_cmd = app.add_subcommand("sweep", "sweep s and emit CSV and SVG");
    std::string w_param = "s", w_targets = "roots", w_emit = "csv,svg", w_prefix = "sweep";
    double w_from = 0.1, w_to = 0.9;
    int w_steps = 9, w_N = 3, w_k = 2;
    w_cmd->add_option("--param", w_param, "swept parameter (s)");
    w_cmd->add_option("--from", w_from, "first value");
    w_cmd->add_option("--to", w_to, "last value");
    w_cmd->add_option("--steps", w_steps, "number of grid points");
    w_cmd->add_option("--targets", w_targets, "roots | bounds");
    w_cmd->add_option("--emit", w_emit, "csv, svg or csv,svg");
    w_cmd->add_option("--prefix", w_prefix, "output path prefix");
    w_cmd->add_option("--N", w_N, "dimension");
    w_cmd->add_option("--k", w_k, "frame size for gamma-bar");

    // eval
    auto* e_cmd = app.add_subcommand("eval", "evaluate a serialized field or an operator on it");
    std::string e_field, e_x, e_xi, e_op = "value";
    double e_s = 0.5;
    int e_k = 1;
    e_cmd->add_option("--field", e_field, "field JSON document")->required();
    e_cmd->add_option("--x", e_x, "point, comma separated")->required();
    e_cmd->add_option("--xi", e_xi, "direction for --op directional");
    e_cmd->add_option("--op", e_op, "value | directional | search-plus | search-minus");
    e_cmd->add_option("--s", e_s, "order s");
    e_cmd->add_option("--k", e_k, "frame size for the searches");

    // profile
    auto* p_cmd = app.add_subcommand("profile", "emit a field document");
    ProfileArgs pa;
    p_cmd->add_option("--kind", pa.kind,
                      "w_gamma | v_gamma | v_minus_gamma | psi | bump_train | halfspace_power_tail | power_profile | "
                      "thin_supersolution | singular_power")
        ->required();
    p_cmd->add_option("--gamma", pa.gamma, "exponent gamma");
    p_cmd->add_option("--s", pa.s, "order s");
    p_cmd->add_option("--mu", pa.mu, "power mu");
    p_cmd->add_option("--eps", pa.eps, "bump half-width");
    p_cmd->add_option("--p", pa.p, "exponent p");
    p_cmd->add_option("--k", pa.k, "frame size (psi)");
    p_cmd->add_option("--N", pa.N, "dimension for the surface metadata");
    p_cmd->add_option("--window", pa.window, "bump window");
    p_cmd->add_option("--psi-kind", pa.psi_kind, "decay | halfint | growth");
    p_cmd->add_option("--op", pa.op, "ik-minus | in-plus");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::map<std::string, std::string> flags;
        for (const auto& [k, opt] : flag_opts)
            if (opt->count() > 0) flags[k] = flag_values[k];
        const Config cfg = Config::resolve(config_file, flags);

        if (c_cmd->parsed()) {
            emit(out_path, constants_doc(c_s, c_N, c_k, c_gamma, c_mu, cfg).dump(2));
            return 0;
        }
        if (r_cmd->parsed()) {
            emit(out_path, roots_doc(r_which, r_N, r_k, r_s, cfg).dump(2));
            return 0;
        }
        if (t_cmd->parsed()) {
            const ExponentTable t = exponent_table(t_N, t_s, root_options(cfg));
            emit(out_path, cfg.format == "csv" ? t.to_csv() : table_doc(t).dump(2));
            return 0;
        }
        if (v_cmd->parsed()) {
            const VerificationReport rep = run_verify(va, cfg);
            const std::string doc = rep.to_json().dump(2);
            if (!va.report.empty()) {
                cli::write_atomically(va.report, doc);
                std::cout << rep.construction << ": " << verdict_name(rep.verdict) << " (max violation "
                          << num_text(rep.max_violation) << ")\n";
                if (rep.extra.contains("empirical_R0")) std::cout << "empirical R0: " << rep.extra["empirical_R0"].dump() << "\n";
            } else {
                emit(out_path, doc);
            }
            return verdict_exit(rep.verdict);
        }
        if (w_cmd->parsed()) {
            if (w_param != "s") throw DomainError("only the parameter s can be swept");
            if (w_steps < 1) throw DomainError("steps must be positive");
            if (w_targets != "roots" && w_targets != "bounds") throw DomainError("targets must be roots or bounds");
            require_dimension(w_N);
            std::vector<std::string> names;
            if (w_targets == "roots") names = {"gamma_bar_k" + std::to_string(w_k), "gamma_tilde", "gamma_plus"};
            else names = {"p_upper_IN_minus", "p_upper_Ik_plus_lower", "whole_space_Ik_plus"};
            std::vector<SweepRow> rows(static_cast<std::size_t>(w_steps));
            const RootOptions ro = root_options(cfg);
            std::atomic<int> next{0};
            auto work = [&]() {
                for (int i = next.fetch_add(1); i < w_steps; i = next.fetch_add(1)) {
                    auto& row = rows[static_cast<std::size_t>(i)];
                    row.s = w_steps == 1 ? w_from : w_from + (w_to - w_from) * i / (w_steps - 1);
                    row.values.assign(3, std::nullopt);
                    // Each target is independent; a failure only blanks its own cell.
                    auto cell = [&](int j, auto&& fn) {
                        try {
                            row.values[static_cast<std::size_t>(j)] = fn();
                        } catch (const std::exception& e) {
                            if (!row.error.empty()) row.error += "; ";
                            row.error += names[static_cast<std::size_t>(j)] + ": " + e.what();
                        }
                    };
                    const double s = row.s;
                    if (w_targets == "roots") {
                        cell(0, [&]() -> std::optional<double> {
                            auto r = find_gamma_bar(w_k, s, ro);
                            return r ? std::optional<double>(r->root) : std::nullopt;
                        });
                        cell(1, [&]() -> std::optional<double> { return find_gamma_tilde(w_N, s, ro).root; });
                        cell(2, [&]() -> std::optional<double> { return find_gamma_plus(w_N, s, ro).root; });
                    } else {
                        cell(0, [&]() -> std::optional<double> { return 1.0 + 2.0 * s / find_gamma_plus(w_N, s, ro).root; });
                        cell(1, [&]() -> std::optional<double> {
                            if (w_k == 1 && s >= 0.5) return 1.0 / (1.0 - s);
                            auto r = find_gamma_bar(w_k, s, ro);
                            if (!r) throw NoRoot("gamma_bar does not exist");
                            return 1.0 + 2.0 * s / (r->root + 1.0);
                        });
                        cell(2, [&]() -> std::optional<double> {
                            auto r = find_gamma_bar(w_k, s, ro);
                            return r ? std::optional<double>(1.0 + 2.0 * s / r->root) : std::nullopt;
                        });
                    }
                }
            };
            const unsigned hw = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::max(1u, std::thread::hardware_concurrency());
            std::vector<std::thread> pool;
            for (unsigned t = 1; t < std::min<unsigned>(hw, static_cast<unsigned>(w_steps)); ++t) pool.emplace_back(work);
            work();
            for (auto& t : pool) t.join();

            std::ostringstream csv;
            csv.precision(15);
            csv << "s";
            for (const auto& n : names) csv << ',' << n;
            csv << ",error\r\n";
            for (const auto& r : rows) {
                csv << r.s;
                for (const auto& v : r.values) {
                    csv << ',';
                    if (v) csv << *v;
                }
                csv << ',' << csv_field(r.error) << "\r\n";
            }
            const bool want_csv = w_emit.find("csv") != std::string::npos;
            const bool want_svg = w_emit.find("svg") != std::string::npos;
            if (!want_csv && !want_svg) throw DomainError("emit must name csv and/or svg");
            json written = json::array();
            if (want_csv) {
                cli::write_atomically(w_prefix + ".csv", csv.str());
                written.push_back(w_prefix + ".csv");
            }
            if (want_svg) {
                std::vector<cli::Series> series;
                for (std::size_t j = 0; j < names.size(); ++j) {
                    cli::Series sr{names[j], {}, {}};
                    for (const auto& r : rows) {
                        sr.x.push_back(r.s);
                        sr.y.push_back(r.values[j]);
                    }
                    series.push_back(sr);
                }
                const std::string title = (w_targets == "roots" ? "roots, N = " : "critical exponents, N = ") +
                                          std::to_string(w_N) + ", k = " + std::to_string(w_k);
                cli::write_atomically(w_prefix + ".svg", cli::line_chart_svg(title, "s", series));
                written.push_back(w_prefix + ".svg");
            }
            int failures = 0;
            for (const auto& r : rows) failures += r.error.empty() ? 0 : 1;
            emit(out_path, json{{"written", written}, {"rows", w_steps}, {"rows_with_errors", failures}}.dump(2));
            return 0;
        }
        if (e_cmd->parsed()) {
            std::ifstream in(e_field);
            if (!in) throw DomainError("cannot read field document '" + e_field + "'");
            const FieldPtr u = field_from_json(json::parse(in));
            const Vec x = parse_vec(e_x, "x");
            json out = {{"kind", u->kind()}, {"x", vec_json(x)}, {"op", e_op}};
            if (e_op == "value") {
                out["value"] = u->value(x);
            } else if (e_op == "directional") {
                if (e_xi.empty()) throw DomainError("--xi is required for --op directional");
                const Vec xi = parse_vec(e_xi, "xi");
                out["xi"] = vec_json(xi);
                out["s"] = e_s;
                out["result"] = result_json(directional_at(*u, x, xi, e_s, cfg.tolerance()));
            } else if (e_op == "search-plus" || e_op == "search-minus") {
                const auto variant = e_op == "search-plus" ? SearchVariant::plus : SearchVariant::minus;
                const SearchResult r = extremal_search(*u, x, e_s, e_k, variant, cfg.budget(), cfg.tolerance());
                json frame = json::array();
                for (int i = 0; i < r.frame.size(); ++i) frame.push_back(vec_json(r.frame.vector(i)));
                out["s"] = e_s;
                out["k"] = e_k;
                out["result"] = result_json(r.value);
                out["frame"] = frame;
                out["budget_exhausted"] = r.budget_exhausted;
                out["semantics"] = variant == SearchVariant::plus ? "lower bound for the supremum" : "upper bound for the infimum";
            } else {
                throw DomainError("op must be value, directional, search-plus or search-minus");
            }
            emit(out_path, out.dump(2));
            return 0;
        }
        if (p_cmd->parsed()) {
            require_dimension(pa.N);
            emit(out_path, field_to_json(*build_profile(pa), pa.N).dump(2));
            return 0;
        }
    } catch (const ExponentOutOfRange& e) {
        std::cerr << "error: " << e.what() << " (threshold " << num_text(e.threshold()) << ")\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed document: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid number: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
