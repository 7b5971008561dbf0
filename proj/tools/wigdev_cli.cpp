#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <wigdev/wigdev.hpp>

namespace fs = std::filesystem;
using wigdev::io::json;
using namespace wigdev;

namespace {

constexpr int kOk = 0;
constexpr int kAssertion = 1;
constexpr int kUsage = 2;
constexpr int kValidation = 3;

enum class Type { integer, pow2, real, positive, boolean, list, text, optional_real };

struct Key {
    std::string name;
    std::string fallback;
    Type type;
};

const std::string kTwoPi = "6.283185307179586";

std::vector<Key> common_keys() { return {{"grid.hbar", "1", Type::positive}, {"output.binary", "false", Type::boolean}}; }

const std::map<std::string, std::vector<Key>>& key_table() {
    static const std::map<std::string, std::vector<Key>> table = [] {
        std::map<std::string, std::vector<Key>> t;
        const std::vector<Key> profile{{"profile.kind", "ho0", Type::text},
                                       {"profile.input", "", Type::text},
                                       {"profile.anchor", "0", Type::real},
                                       {"profile.n_p", "512", Type::pow2},
                                       {"profile.p_max", "8", Type::positive},
                                       {"profile.gaussian_N", "0.3183098861837907", Type::real},
                                       {"profile.gaussian_M", "1", Type::positive}};
        t["box-wigner"] = {{"grid.n_x", "512", Type::pow2},   {"grid.x_min", "-1", Type::real},
                           {"grid.x_max", "3", Type::real},   {"phys.mass", "1", Type::positive},
                           {"box.L", "2", Type::positive},    {"box.levels", "3", Type::integer},
                           {"box.tolerance", "1e-4", Type::positive}};
        t["stargen-residual"] = {{"grid.x_min", "-1", Type::real},
                                 {"grid.x_max", "3", Type::real},
                                 {"phys.mass", "1", Type::positive},
                                 {"starcalc.L", "2", Type::positive},
                                 {"starcalc.sizes", "512,1024,2048", Type::list},
                                 {"starcalc.x0", "1", Type::real},
                                 {"starcalc.fade_end", "2.8", Type::real},
                                 {"starcalc.p_band", "2", Type::positive},
                                 {"starcalc.tolerance", "1e-3", Type::positive},
                                 {"starcalc.min_ratio", "1.8", Type::positive},
                                 {"starcalc.naive_ratio", "0.1", Type::positive},
                                 {"starcalc.epsilons", "4e-3,2e-3,1e-3", Type::list},
                                 {"starcalc.lambda_n", "2048", Type::pow2},
                                 {"starcalc.lambda_tolerance", "1e-3", Type::positive}};
        t["eigen-solve"] = {{"grid.n_x", "4096", Type::pow2},
                            {"grid.x_min", "-2", Type::real},
                            {"grid.x_max", "2", Type::real},
                            {"phys.mass", "1", Type::positive},
                            {"schrod.a", "-1", Type::real},
                            {"schrod.b", "1", Type::real},
                            {"schrod.epsilon", "0.01", Type::positive},
                            {"schrod.refine_epsilon", "0.0025", Type::optional_real},
                            {"schrod.energy", "", Type::optional_real},
                            {"schrod.tolerance", "2e-2", Type::positive},
                            {"schrod.interior_margin", "0.1", Type::real},
                            {"schrod.levels", "3", Type::integer},
                            {"schrod.energy_tolerance", "1e-4", Type::positive},
                            {"schrod.scaling_tolerance", "1e-3", Type::positive},
                            {"schrod.scan", "false", Type::boolean},
                            {"schrod.scan_width", "0.4", Type::positive},
                            {"schrod.scan_samples", "21", Type::integer}};
        t["positivity-demo"] = {{"grid.n_x", "1024", Type::pow2},
                                {"projection.L", "2", Type::positive},
                                {"projection.tolerance", "1e-4", Type::positive},
                                {"projection.extra_pairs", "true", Type::boolean}};
        t["profile-check"] = profile;
        t["profile-check"].push_back({"profile.expect", "auto", Type::text});
        t["profile-realize"] = profile;
        for (const Key& k : std::vector<Key>{{"realize.sigma", "1", Type::positive},
                                             {"realize.even_seed_scale", "0", Type::real},
                                             {"realize.tolerance", "1e-4", Type::positive}})
            t["profile-realize"].push_back(k);
        t["profile-compat"] = {{"profile.n_p", "512", Type::pow2},
                               {"profile.p_max", "8", Type::positive},
                               {"profile.gaussian_N", "0.3183098861837907", Type::real},
                               {"profile.gaussian_M", "1", Type::positive},
                               {"compat.a_kind", "ho0", Type::text},
                               {"compat.a_anchor", "0", Type::real},
                               {"compat.a_input", "", Type::text},
                               {"compat.b_kind", "gauss-quadratic", Type::text},
                               {"compat.b_anchor", "", Type::optional_real},
                               {"compat.b_input", "", Type::text},
                               {"compat.expect", "auto", Type::text}};
        t["ho-flow"] = {{"grid.n_x", "256", Type::pow2},       {"flow.state", "ho1", Type::text},
                        {"flow.x0", "1", Type::real},          {"flow.p0", "0", Type::real},
                        {"flow.snapshots", "8", Type::integer}, {"flow.t_end", kTwoPi, Type::real},
                        {"flow.tolerance", "1e-3", Type::positive}, {"flow.rk4", "false", Type::boolean},
                        {"flow.rk4_time", "1", Type::real},    {"flow.rk4_tolerance", "1e-4", Type::positive}};
        t["profile-roundtrip"] = {{"grid.n_x", "256", Type::pow2},
                                  {"roundtrip.state", "ho1", Type::text},
                                  {"roundtrip.x0", "1", Type::real},
                                  {"roundtrip.p0", "0", Type::real},
                                  {"roundtrip.times", "64", Type::integer},
                                  {"roundtrip.tolerance", "2e-3", Type::positive},
                                  {"roundtrip.redundancy_tolerance", "1e-3", Type::positive},
                                  {"roundtrip.g0_state", "", Type::text},
                                  {"roundtrip.gL_anchor", "", Type::optional_real}};
        t["confined-stationarity"] = {{"grid.x_min", "-1", Type::real},
                                      {"grid.x_max", "3", Type::real},
                                      {"phys.mass", "1", Type::positive},
                                      {"confined.L", "2", Type::positive},
                                      {"confined.level", "1", Type::integer},
                                      {"confined.sizes", "256,512,1024", Type::list},
                                      {"confined.eps_cells", "4", Type::positive},
                                      {"confined.p_band", "2", Type::positive},
                                      {"confined.margin", "0", Type::real},
                                      {"confined.min_ratio", "1.5", Type::positive}};
        t["closest-wigner"] = {{"grid.n_x", "512", Type::pow2},
                               {"approx.field", "ho-mix", Type::text},
                               {"approx.mix", "0.3", Type::real},
                               {"approx.x0", "1.5", Type::real},
                               {"approx.p0", "0.5", Type::real},
                               {"approx.L", "2", Type::positive},
                               {"approx.chi_weight", "0.5", Type::real},
                               {"approx.eps", "1e-6", Type::positive},
                               {"approx.N_max", "32", Type::integer},
                               {"approx.center", "0", Type::real},
                               {"approx.orders", "4,8,16,32", Type::list},
                               {"approx.lambda_tolerance", "1e-8", Type::positive},
                               {"approx.wigner_tolerance", "1e-4", Type::positive}};
        for (auto& [name, keys] : t)
            for (const auto& k : common_keys()) keys.push_back(k);
        return t;
    }();
    return table;
}

void validate_value(const Key& k, const Config& c) {
    if (!c.has(k.name)) return;
    const std::string v = c.get_string(k.name, "");
    switch (k.type) {
        case Type::integer: (void)c.get_int(k.name, 0); break;
        case Type::pow2: {
            const long n = c.get_int(k.name, 0);
            if (n < 8 || (n & (n - 1)) != 0) throw ConfigError(k.name + ": must be a power of two >= 8");
            break;
        }
        case Type::real:
            if (!std::isfinite(c.get_double(k.name, 0))) throw ConfigError(k.name + ": must be finite");
            break;
        case Type::positive:
            if (!(c.get_double(k.name, 0) > 0) || !std::isfinite(c.get_double(k.name, 0)))
                throw ConfigError(k.name + ": must be positive");
            break;
        case Type::boolean: (void)c.get_bool(k.name, false); break;
        case Type::list: (void)c.get_list(k.name, {}); break;
        case Type::optional_real:
            if (!v.empty()) (void)c.get_double(k.name, 0);
            break;
        case Type::text: break;
    }
}

Config effective_config(const std::string& sub, const Config& given) {
    const auto& keys = key_table().at(sub);
    std::vector<std::string> names;
    for (const auto& k : keys) names.push_back(k.name);
    const auto unknown = given.unknown_keys(names);
    if (!unknown.empty()) {
        std::string msg = "unknown key(s) for " + sub + ":";
        for (const auto& u : unknown) msg += " " + u;
        throw ConfigError(msg);
    }
    Config eff;
    for (const auto& k : keys) eff.set(k.name, given.get_string(k.name, k.fallback));
    for (const auto& k : keys) validate_value(k, eff);
    return eff;
}

class Run {
public:
    Run(std::string sub, Config cfg, fs::path out, bool quiet)
        : sub_(std::move(sub)), cfg_(std::move(cfg)), out_(std::move(out)), quiet_(quiet),
          start_(std::chrono::steady_clock::now()) {}

    [[nodiscard]] double d(const std::string& k) const { return cfg_.get_double(k, 0.0); }
    [[nodiscard]] long n(const std::string& k) const { return cfg_.get_int(k, 0); }
    [[nodiscard]] bool flag(const std::string& k) const { return cfg_.get_bool(k, false); }
    [[nodiscard]] std::string s(const std::string& k) const { return cfg_.get_string(k, ""); }
    [[nodiscard]] std::vector<double> list(const std::string& k) const { return cfg_.get_list(k, {}); }
    [[nodiscard]] std::optional<double> opt(const std::string& k) const {
        if (s(k).empty()) return std::nullopt;
        return d(k);
    }
    [[nodiscard]] std::size_t size(const std::string& k) const { return static_cast<std::size_t>(n(k)); }
    [[nodiscard]] double hbar() const { return d("grid.hbar"); }

    fs::path file(const std::string& name) {
        outputs_.push_back(name);
        return out_ / name;
    }
    [[nodiscard]] const fs::path& dir() const { return out_; }
    void note_output(const std::string& name) { outputs_.push_back(name); }

    void write_field(const std::string& stem, const RealField& F) {
        io::write_field_csv(file(stem + ".csv"), F);
        if (flag("output.binary")) {
            io::write_field_binary(out_ / stem, F);
            note_output(stem + ".json");
            note_output(stem + ".bin");
        }
    }

    void check(const std::string& name, bool ok, json detail = json::object()) {
        detail["name"] = name;
        detail["passed"] = ok;
        checks_.push_back(detail);
        if (!quiet_) std::cout << (ok ? "  ok    " : "  FAIL  ") << name << '\n';
    }

    template <class F>
    auto timed(const std::string& phase, F&& f) {
        const auto t0 = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            timings_[phase] += seconds_since(t0);
        } else {
            auto r = f();
            timings_[phase] += seconds_since(t0);
            return r;
        }
    }

    void log(const std::string& line) const {
        if (!quiet_) std::cout << line << '\n';
    }

    json summary = json::object();

    [[nodiscard]] bool all_passed() const {
        return std::all_of(checks_.begin(), checks_.end(), [](const json& c) { return c["passed"].get<bool>(); });
    }

    void write_manifest(int exit_code, const std::string& message = {}) {
        timings_["total"] = seconds_since(start_);
        json cfg = json::object();
        for (const auto& [k, v] : cfg_.entries()) cfg[k] = v;
        json m{{"subcommand", sub_},   {"version", WIGDEV_VERSION}, {"config_hash", cfg_.hash()},
               {"config", cfg},        {"timings_s", timings_},     {"outputs", outputs_},
               {"checks", checks_},    {"exit_code", exit_code},    {"deterministic", true},
               {"libraries", {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." + std::to_string(EIGEN_MINOR_VERSION)},
                              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                              {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000)}}}};
        if (!summary.empty()) {
            io::write_json(out_ / "summary.json", summary);
            outputs_.push_back("summary.json");
            m["outputs"] = outputs_;
        }
        if (exit_code != kOk) {
            json diag{{"subcommand", sub_},
                      {"exit_code", exit_code},
                      {"kind", exit_code == kValidation ? "validation" : "assertion"},
                      {"config_hash", cfg_.hash()}};
            json failed = json::array();
            for (const auto& c : checks_)
                if (!c["passed"].get<bool>()) failed.push_back(c);
            diag["failed_checks"] = failed;
            if (!message.empty()) diag["message"] = message;
            io::write_json(out_ / "diagnostic.json", diag);
            m["diagnostic"] = "diagnostic.json";
            std::cerr << diag.dump() << '\n';
        }
        io::write_json(out_ / "manifest.json", m);
    }

private:
    static double seconds_since(std::chrono::steady_clock::time_point t0) {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    std::string sub_;
    Config cfg_;
    fs::path out_;
    bool quiet_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> outputs_;
    json checks_ = json::array();
    std::map<std::string, double> timings_;
};

json wigner_checks(const RealField& W, const WaveFunction* psi) {
    const double hbar = W.grid().hbar();
    const auto br = support_and_bound_report(W, Interval{-1e300, 1e300});
    json j{{"normalization_defect", br.normalization_defect},
           {"self_moyal_defect", std::abs(2 * pi * hbar * moyal_overlap(W, W) - 1)},
           {"bound_excess", br.bound_excess}};
    if (psi) {
        const auto m = marginals(W);
        double worst = 0;
        for (std::size_t i = 0; i < psi->size(); ++i) worst = std::max(worst, std::abs(m.position[i] - std::norm((*psi)[i])));
        j["position_marginal_defect"] = worst;
    }
    return j;
}

void write_state_csv(const fs::path& path, const WaveFunction& psi) {
    auto f = io::open_out(path);
    f << "x,re,im,abs2\n";
    for (std::size_t i = 0; i < psi.size(); ++i)
        f << psi.grid()[i] << ',' << psi[i].real() << ',' << psi[i].imag() << ',' << std::norm(psi[i]) << '\n';
}

// Box states, their Wigner fields and the difference from the closed form.
int box_wigner(Run& r) {
    const Grid1D g(r.d("grid.x_min"), r.d("grid.x_max"), r.size("grid.n_x"), r.hbar());
    const auto pg = PhaseGrid::wigner_dual(g);
    const double L = r.d("box.L"), m = r.d("phys.mass"), tol = r.d("box.tolerance");
    const long levels = r.n("box.levels");
    if (levels < 1) throw ConfigError("box.levels must be >= 1");
    json rows = json::array();
    for (int lev = 1; lev <= levels; ++lev) {
        const auto st = box_eigenstate(lev, L, g, 0.0, m);
        const auto W = r.timed("wigner", [&] { return wigner_transform(st.state, pg); });
        const auto A = r.timed("analytic", [&] { return box_wigner_analytic(lev, L, pg); });
        RealField D = W;
        D -= A;
        const auto br = support_and_bound_report(W, Interval{0.0, L});
        json row = wigner_checks(W, &st.state);
        row["level"] = lev;
        row["energy"] = st.energy;
        row["analytic_sup_diff"] = D.sup_norm();
        row["outside_strip_max"] = br.outside_strip_max;
        double wall = 0;
        bool walls_on_nodes = true;
        try {
            for (std::size_t i : {g.node_of(0.0), g.node_of(L)})
                for (double v : W.row(i)) wall = std::max(wall, std::abs(v));
        } catch (const DomainError&) {
            walls_on_nodes = false;
        }
        row["wall_max"] = walls_on_nodes ? json(wall) : json(nullptr);
        const std::string tag = "n" + std::to_string(lev);
        r.timed("write", [&] {
            r.write_field("box_wigner_" + tag, W);
            r.write_field("box_wigner_diff_" + tag, D);
        });
        r.log("level " + std::to_string(lev) + ": sup|W - analytic| = " + std::to_string(D.sup_norm()));
        r.check("analytic_agreement_" + tag, D.sup_norm() <= tol, {{"value", D.sup_norm()}, {"tolerance", tol}});
        r.check("normalized_" + tag, row["normalization_defect"].get<double>() <= 1e-6);
        r.check("bound_" + tag, br.bound_excess <= 1e-6);
        r.check("support_" + tag, br.outside_strip_max < 1e-8);
        if (walls_on_nodes) r.check("dirichlet_walls_" + tag, wall <= 1e-6, {{"value", wall}});
        rows.push_back(row);
    }
    r.summary = {{"grid", io::grid_json(g)}, {"L", L}, {"levels", rows}};
    return kOk;
}

// Naive and boundary-corrected stargenvalue residuals and the smoothed-delta identity.
int stargen_residual(Run& r) {
    const double L = r.d("starcalc.L"), m = r.d("phys.mass"), hbar = r.hbar();
    const double x0 = r.d("starcalc.x0"), fe = r.d("starcalc.fade_end"), P = r.d("starcalc.p_band");
    const double tol = r.d("starcalc.tolerance"), min_ratio = r.d("starcalc.min_ratio");
    const double E = pi * pi * hbar * hbar / (2 * m * L * L);
    const std::function<cplx(double)> phi = [&](double x) { return cplx(std::sqrt(2 / L) * std::sin(pi * x / L)); };
    auto csv = io::open_out(r.file("stargen_residual.csv"));
    csv << "n,dx,residual,halving_ratio,naive_imag_ratio\n";
    json rows = json::array();
    double prev = 0;
    for (double nd : r.list("starcalc.sizes")) {
        const auto n = static_cast<std::size_t>(nd);
        const Grid1D g(r.d("grid.x_min"), r.d("grid.x_max"), n, hbar);
        const auto pg = PhaseGrid::wigner_dual(g);
        const auto box = box_eigenstate(1, L, g, 0.0, m).state;
        const auto W = r.timed("wigner", [&] { return wigner_transform(box, pg); });
        const double naive = r.timed("star", [&] { return imag_part(kinetic_star(W, m)).sup_norm(); }) / W.sup_norm();
        const auto psi = continued_half_line_state(phi, 0.0, L, fe, g, m);
        const auto F1 = r.timed("wigner", [&] { return wigner_transform(psi, pg); });
        const auto res = r.timed("residual", [&] { return stargenvalue_residual(F1, E, psi, 0.0, x0, P); });
        const double ratio = prev > 0 ? prev / res.residual : 0.0;
        csv << n << ',' << g.dx() << ',' << res.residual << ',' << ratio << ',' << naive << '\n';
        rows.push_back({{"n", n}, {"residual", res.residual}, {"halving_ratio", ratio}, {"naive_imag_ratio", naive}});
        r.log("n=" + std::to_string(n) + " residual " + std::to_string(res.residual) + " naive imag ratio " + std::to_string(naive));
        const std::string tag = "n" + std::to_string(n);
        r.check("naive_star_fails_" + tag, naive > r.d("starcalc.naive_ratio"), {{"value", naive}});
        r.check("corrected_residual_" + tag, res.residual < tol, {{"value", res.residual}, {"tolerance", tol}});
        if (prev > 0) r.check("halves_" + tag, ratio >= min_ratio, {{"value", ratio}, {"minimum", min_ratio}});
        prev = res.residual;
    }

    const Grid1D g(r.d("grid.x_min"), r.d("grid.x_max"), r.size("starcalc.lambda_n"), hbar);
    const auto pg = PhaseGrid::wigner_dual(g);
    const auto box = box_eigenstate(1, L, g, 0.0, m).state;
    const auto B1 = boundary_term_B1(box, 0.0, x0, pg);
    auto lcsv = io::open_out(r.file("lambda_gap.csv"));
    lcsv << "epsilon,gap\n";
    json gaps = json::array();
    std::vector<double> eps = r.list("starcalc.epsilons"), gap;
    for (double e : eps) {
        const auto Lam = r.timed("lambda", [&] { return lambda_epsilon(box, 0.0, L, e, x0, pg); });
        const cplx pref(0, hbar * hbar / (4 * pi * m));
        double worst = 0;
        for (std::size_t i = 0; i < pg.nx(); ++i)
            for (std::size_t k = 0; k < pg.np(); ++k)
                if (std::abs(pg.p()[k]) <= P) worst = std::max(worst, std::abs(pref * Lam(i, k) - B1(i, k)));
        gap.push_back(worst);
        lcsv << e << ',' << worst << '\n';
        gaps.push_back({{"epsilon", e}, {"gap", worst}});
    }
    const auto smallest = std::min_element(eps.begin(), eps.end()) - eps.begin();
    r.check("lambda_identity", gap[static_cast<std::size_t>(smallest)] < r.d("starcalc.lambda_tolerance"),
            {{"value", gap[static_cast<std::size_t>(smallest)]}});
    for (std::size_t j = 1; j < eps.size(); ++j) {
        const double expect = eps[j - 1] / eps[j], got = gap[j - 1] / gap[j];
        r.check("lambda_gap_linear_" + std::to_string(j), std::abs(got / expect - 1) < 0.2,
                {{"gap_ratio", got}, {"epsilon_ratio", expect}});
    }
    r.summary = {{"energy", E}, {"p_band", P}, {"x0", x0}, {"fade_end", fe}, {"residuals", rows}, {"lambda_gaps", gaps}};
    return kOk;
}

// Smoothed boundary-potential eigenproblem against the hard-wall box.
int eigen_solve(Run& r) {
    const Grid1D g(r.d("grid.x_min"), r.d("grid.x_max"), r.size("grid.n_x"), r.hbar());
    SmoothedProblem prob{r.d("schrod.a"), r.d("schrod.b"), r.d("phys.mass"), true};
    if (!(prob.a < prob.b)) throw ConfigError("schrod.a must be below schrod.b");
    const double Lb = prob.b - prob.a, hbar = r.hbar();
    const double E1 = pi * pi * hbar * hbar / (2 * prob.mass * Lb * Lb);
    const double E = r.opt("schrod.energy").value_or(E1);
    const double margin = r.d("schrod.interior_margin");
    const Interval interior{prob.a + margin, prob.b - margin};

    auto solve = [&](double eps, const std::string& name) {
        const auto sol = r.timed("solve", [&] { return solve_boundary_potential(eps, E, g, prob); });
        auto f = io::open_out(r.file(name));
        f << "x,psi_eps,phi1\n";
        for (std::size_t i = 0; i < g.size(); ++i) f << g[i] << ',' << sol.psi[i].real() << ',' << sol.reference[i].real() << '\n';
        double exterior = 0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g[i] < prob.a || g[i] > prob.b) exterior = std::max(exterior, std::abs(sol.psi[i]));
        const double mis = sup_mismatch(sol.psi, sol.reference, interior);
        r.log("epsilon " + std::to_string(eps) + ": interior mismatch " + std::to_string(mis));
        return json{{"epsilon", eps}, {"mismatch", mis}, {"exterior_max", exterior}, {"condition_estimate", sol.condition_estimate}};
    };
    json runs = json::array();
    const auto primary = solve(r.d("schrod.epsilon"), "eigen_solve.csv");
    runs.push_back(primary);
    const double tol = r.d("schrod.tolerance");
    r.check("interior_mismatch", primary["mismatch"].get<double>() < tol,
            {{"value", primary["mismatch"]}, {"tolerance", tol}});
    if (const auto e2 = r.opt("schrod.refine_epsilon")) {
        const auto refined = solve(*e2, "eigen_solve_refined.csv");
        runs.push_back(refined);
        r.check("refinement_reduces_mismatch", refined["mismatch"].get<double>() < primary["mismatch"].get<double>(),
                {{"coarse", primary["mismatch"]}, {"fine", refined["mismatch"]}});
    }

    const long levels = r.n("schrod.levels");
    const auto ref = r.timed("reference", [&] { return solve_reference_box(Interval{prob.a, prob.b}, static_cast<int>(levels), g, prob.mass); });
    auto rf = io::open_out(r.file("reference_levels.csv"));
    rf << "level,energy,exact,scaled_ratio\n";
    json lv = json::array();
    double worst_scaling = 0;
    for (long l = 1; l <= levels; ++l) {
        const double e = ref.energies[static_cast<std::size_t>(l - 1)];
        const double ratio = e / (static_cast<double>(l * l) * ref.energies[0]);
        worst_scaling = std::max(worst_scaling, std::abs(ratio - 1));
        rf << l << ',' << e << ',' << E1 * static_cast<double>(l * l) << ',' << ratio << '\n';
        lv.push_back({{"level", l}, {"energy", e}, {"exact", E1 * static_cast<double>(l * l)}});
    }
    r.check("reference_ground_energy", std::abs(ref.energies[0] - E1) < r.d("schrod.energy_tolerance"),
            {{"value", ref.energies[0]}, {"exact", E1}});
    r.check("reference_n2_scaling", worst_scaling < r.d("schrod.scaling_tolerance"), {{"value", worst_scaling}});

    json scan = nullptr;
    if (r.flag("schrod.scan")) {
        const double w = r.d("schrod.scan_width");
        const auto s = r.timed("scan", [&] {
            return energy_scan(r.d("schrod.epsilon"), Interval{E - w, E + w}, g, prob, static_cast<int>(r.n("schrod.scan_samples")));
        });
        auto sf = io::open_out(r.file("energy_scan.csv"));
        sf << "energy,defect\n";
        for (std::size_t k = 0; k < s.energies.size(); ++k) sf << s.energies[k] << ',' << s.defects[k] << '\n';
        scan = {{"best_energy", s.best_energy}, {"best_defect", s.best_defect}, {"interior_minimum", s.interior_minimum}};
    }
    r.summary = {{"grid", io::grid_json(g)}, {"energy", E}, {"a", prob.a}, {"b", prob.b}, {"solutions", runs},
                 {"reference_levels", lv}, {"energy_scan", scan}};
    return kOk;
}

// Witnesses for the default box pair and further (phi, chi) pairs.
int positivity_demo(Run& r) {
    const double L = r.d("projection.L"), tol = r.d("projection.tolerance");
    const Grid1D g = staggered_strip_grid(L, r.size("grid.n_x"), r.hbar());
    const auto pg = PhaseGrid::wigner_dual(g);
    auto box = [&](int n, double a) { return box_eigenstate(n, L, g, a).state; };
    auto bump = [&](double a, int power) {
        return WaveFunction::sample(g, [=](double x) {
                   const double u = (x - a) / L;
                   return (u > 0 && u < 1) ? std::pow(u * (1 - u), power) : 0.0;
               }).normalized_copy();
    };
    struct Pair {
        std::string name;
        WaveFunction phi, chi;
    };
    std::vector<Pair> pairs{{"box1_box1", box(1, 0.0), box(1, L)}};
    if (r.flag("projection.extra_pairs")) {
        pairs.push_back({"box2_box1", box(2, 0.0), box(1, L)});
        pairs.push_back({"box1_box3", box(1, 0.0), box(3, L)});
        pairs.push_back({"bump2_bump1", bump(0.0, 2), bump(L, 1).scaled(0.5)});
    }
    json all = json::array();
    for (const auto& p : pairs) {
        const auto w = r.timed("witness", [&] { return positivity_witness(p.phi, p.chi, L, pg); });
        auto wj = io::witness_json(w);
        wj["tolerance"] = tol;
        if (&p == &pairs.front()) io::write_json(r.file("witness.json"), wj);
        wj["pair"] = p.name;
        wj["closed_form"] = w.closed_form;
        wj["denominator"] = w.denominator;
        all.push_back(wj);
        r.log(p.name + ": overlap " + std::to_string(w.overlap) + " closed form " + std::to_string(w.closed_form));
        r.check("negative_overlap_" + p.name, w.overlap < 0, {{"value", w.overlap}});
        r.check("closed_form_agreement_" + p.name, std::abs(w.overlap - w.closed_form) <= tol,
                {{"difference", std::abs(w.overlap - w.closed_form)}});
    }
    io::write_json(r.file("witness_pairs.json"), all);
    r.summary = {{"grid", io::grid_json(g)}, {"L", L}, {"pairs", all}};
    return kOk;
}

Grid1D profile_grid(const Run& r) {
    const auto n = r.size("profile.n_p");
    return Grid1D::centered(0.0, 2 * r.d("profile.p_max") / static_cast<double>(n), n, r.hbar());
}

// Built-in profiles: ho0 / ho1 are slices of the oscillator Wigner functions at
// the anchor, gauss-quadratic is exp(-p^2/hbar)(1 + 2p^2/hbar)/(pi hbar e), gaussian is N exp(-p^2/M).
Profile builtin_profile(const Run& r, const std::string& kind, double anchor, const Grid1D& pgrid) {
    const double hbar = pgrid.hbar();
    std::function<double(double)> f;
    if (kind == "ho0")
        f = [&](double p) { return std::exp(-(anchor * anchor + p * p) / hbar) / (pi * hbar); };
    else if (kind == "ho1")
        f = [&](double p) {
            const double s = (anchor * anchor + p * p) / hbar;
            return (2 * s - 1) * std::exp(-s) / (pi * hbar);
        };
    else if (kind == "gauss-quadratic")
        f = [&](double p) { return std::exp(-p * p / hbar) * (1 + 2 * p * p / hbar) / (pi * hbar * std::exp(1.0)); };
    else if (kind == "gaussian")
        f = [&](double p) { return r.d("profile.gaussian_N") * std::exp(-p * p / r.d("profile.gaussian_M")); };
    else
        throw ConfigError("unknown profile kind '" + kind + "' (ho0, ho1, gauss-quadratic, gaussian)");
    Profile g{pgrid, std::vector<double>(pgrid.size()), anchor};
    for (std::size_t k = 0; k < pgrid.size(); ++k) g.values[k] = f(pgrid[k]);
    return g;
}

Profile load_profile(const Run& r, const std::string& kind, const std::string& input, double anchor) {
    if (!input.empty()) return io::read_profile_csv(input, anchor, r.hbar());
    return builtin_profile(r, kind, anchor, profile_grid(r));
}

void write_transform_csv(const fs::path& path, const ProfileTransform& t) {
    auto f = io::open_out(path);
    f << "y,re_h,im_h\n";
    for (std::size_t i = 0; i < t.h.size(); ++i) f << t.y_grid[i] << ',' << t.h[i].real() << ',' << t.h[i].imag() << '\n';
}

int profile_check(Run& r) {
    const std::string kind = r.s("profile.kind"), input = r.s("profile.input");
    const double anchor = r.d("profile.anchor");
    const auto g = load_profile(r, kind, input, anchor);
    const auto rep = r.timed("validate", [&] { return validate_profile(g); });
    io::write_profile_csv(r.file("profile.csv"), g);
    write_transform_csv(r.file("profile_transform.csv"), profile_transform(g));
    json j = io::profile_report_json(rep);
    j["anchor"] = anchor;
    j["source"] = input.empty() ? kind : input;
    if (input.empty() && kind == "gaussian") {
        const auto gb = gaussian_profile_bound(r.d("profile.gaussian_N"), r.d("profile.gaussian_M"), r.hbar());
        j["gaussian_closed_form"] = {{"fourier_l1", gb.fourier_l1}, {"bound", gb.bound}, {"admissible", gb.admissible}};
    }
    io::write_json(r.file("profile_report.json"), j);
    r.log(std::string("admissible: ") + (rep.admissible ? "yes" : "no") + ", saturation " + std::to_string(rep.saturation));

    std::string expect = r.s("profile.expect");
    if (expect == "auto") expect = (input.empty() && (kind == "ho0" || kind == "ho1")) ? "admissible" : "any";
    if (expect == "admissible") r.check("admissible", rep.admissible, {{"saturation", rep.saturation}});
    else if (expect == "inadmissible") r.check("inadmissible", !rep.admissible, {{"saturation", rep.saturation}});
    else if (expect != "any") throw ConfigError("profile.expect must be auto, admissible, inadmissible or any");
    if (input.empty() && kind == "ho0" && anchor == 0.0)
        r.check("ground_state_saturates", std::abs(rep.saturation - 1) <= 1e-6, {{"saturation", rep.saturation}});
    r.summary = j;
    return kOk;
}

int profile_realize(Run& r) {
    const std::string kind = r.s("profile.kind"), input = r.s("profile.input");
    const auto g = load_profile(r, kind, input, r.d("profile.anchor"));
    RealizeOptions opt;
    opt.sigma = r.d("realize.sigma");
    if (const double c = r.d("realize.even_seed_scale"); c != 0.0) opt.even_seed = [c](double y) { return c * y * y; };
    const auto z = r.timed("realize", [&] { return realize_profile(g, opt); });
    write_state_csv(r.file("realized_state.csv"), z.psi);
    io::write_profile_csv(r.file("profile.csv"), g);
    const double tol = r.d("realize.tolerance");
    json j{{"anchor", g.anchor_x},
           {"beta", z.beta},
           {"normalization", z.normalization},
           {"profile_error", z.profile_error},
           {"reality_defect", z.reality_defect},
           {"parity_defect", z.parity_defect},
           {"tolerance", tol}};
    io::write_json(r.file("realization.json"), j);
    r.log("profile round-trip error " + std::to_string(z.profile_error));
    r.check("profile_round_trip", z.profile_error <= tol, {{"value", z.profile_error}, {"tolerance", tol}});
    r.summary = j;
    return kOk;
}

int profile_compat(Run& r) {
    const std::string ak = r.s("compat.a_kind"), bk = r.s("compat.b_kind");
    const std::string ai = r.s("compat.a_input"), bi = r.s("compat.b_input");
    const double aa = r.d("compat.a_anchor");
    const double ba = r.opt("compat.b_anchor").value_or(std::sqrt(r.hbar()));
    const auto ga = load_profile(r, ak, ai, aa);
    const auto gb = load_profile(r, bk, bi, ba);
    const auto v = r.timed("compat", [&] { return check_two_point_compatibility(ga, gb); });
    io::write_profile_csv(r.file("profile_a.csv"), ga);
    io::write_profile_csv(r.file("profile_b.csv"), gb);
    const std::string verdict = v.refuted ? "incompatible" : "not refuted";
    json j{{"verdict", verdict},       {"violated", v.violated}, {"evidence", v.evidence}, {"anchor_a", aa},
           {"anchor_b", ba},           {"zeros_a", v.zeros_a},   {"zeros_b", v.zeros_b},   {"chain", v.chain}};
    io::write_json(r.file("verdict.json"), j);
    r.log("verdict: " + verdict + (v.evidence.empty() ? "" : " (" + v.evidence + ")"));

    std::string expect = r.s("compat.expect");
    if (expect == "auto") {
        const bool inputs = !ai.empty() || !bi.empty();
        if (!inputs && ak == "ho0" && aa == 0.0 && bk == "gauss-quadratic") expect = "incompatible";
        else if (!inputs && ak == bk && (ak == "ho0" || ak == "ho1")) expect = "compatible";
        else expect = "any";
    }
    if (expect == "incompatible") r.check("refuted", v.refuted, {{"evidence", v.evidence}});
    else if (expect == "compatible") r.check("not_refuted", !v.refuted, {{"evidence", v.evidence}});
    else if (expect != "any") throw ConfigError("compat.expect must be auto, incompatible, compatible or any");
    r.summary = j;
    return kOk;
}

RealField named_state_wigner(const std::string& state, double x0, double p0, const PhaseGrid& pg) {
    if (state == "ho0") return harmonic_wigner(0, pg);
    if (state == "ho1") return harmonic_wigner(1, pg);
    if (state == "coherent") return coherent_wigner(x0, p0, pg);
    throw ConfigError("unknown state '" + state + "' (ho0, ho1, coherent)");
}

int ho_flow(Run& r) {
    const auto pg = PhaseGrid::balanced(r.size("grid.n_x"), r.hbar());
    const auto F0 = named_state_wigner(r.s("flow.state"), r.d("flow.x0"), r.d("flow.p0"), pg);
    const long M = r.n("flow.snapshots");
    if (M < 1) throw ConfigError("flow.snapshots must be >= 1");
    const double t_end = r.d("flow.t_end"), tol = r.d("flow.tolerance"), hbar = r.hbar();
    std::vector<double> times;
    std::vector<RealField> fields;
    auto inv = io::open_out(r.file("flow_invariants.csv"));
    inv << "t,integral,purity,mean_x,mean_p\n";
    double worst_int = 0, worst_pur = 0;
    for (long k = 0; k <= M; ++k) {
        const double t = t_end * static_cast<double>(k) / static_cast<double>(M);
        auto F = r.timed("flow", [&] { return harmonic_flow(F0, t); });
        const double integral = F.integral(), purity = 2 * pi * hbar * moyal_overlap(F, F);
        double mx = 0, mp = 0;
        for (std::size_t i = 0; i < F.nx(); ++i)
            for (std::size_t j = 0; j < F.np(); ++j) {
                mx += F(i, j) * pg.x()[i] * pg.cell();
                mp += F(i, j) * pg.p()[j] * pg.cell();
            }
        inv << t << ',' << integral << ',' << purity << ',' << mx << ',' << mp << '\n';
        worst_int = std::max(worst_int, std::abs(integral - F0.integral()));
        worst_pur = std::max(worst_pur, std::abs(purity - 2 * pi * hbar * moyal_overlap(F0, F0)));
        times.push_back(t);
        fields.push_back(std::move(F));
    }
    r.timed("write", [&] { io::write_field_series(r.dir(), times, fields, "flow"); });
    for (long k = 0; k <= M; ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "flow_%04ld.csv", k);
        r.note_output(name);
    }
    r.note_output("flow_manifest.json");
    r.check("normalization_conserved", worst_int <= tol, {{"value", worst_int}});
    r.check("purity_conserved", worst_pur <= tol, {{"value", worst_pur}});
    json j{{"grid_n", pg.nx()}, {"state", r.s("flow.state")}, {"integral_defect", worst_int}, {"purity_defect", worst_pur}};
    if (r.flag("flow.rk4")) {
        const double t = r.d("flow.rk4_time");
        const auto V = Potential::sample([](double x) { return 0.5 * x * x; }, pg);
        const auto R = r.timed("rk4", [&] { return rk4_evolve(F0, V, t, 50); });
        const double diff = sup_distance(R, harmonic_flow(F0, t));
        j["rk4_vs_flow"] = diff;
        r.check("rk4_matches_flow", diff <= r.d("flow.rk4_tolerance"), {{"value", diff}});
    }
    r.log("integral defect " + std::to_string(worst_int) + ", purity defect " + std::to_string(worst_pur));
    r.summary = j;
    return kOk;
}

struct Refusal : Error {
    using Error::Error;
};

int profile_roundtrip(Run& r) {
    const auto pg = PhaseGrid::balanced(r.size("grid.n_x"), r.hbar());
    const std::string state = r.s("roundtrip.state");
    const double x0 = r.d("roundtrip.x0"), p0 = r.d("roundtrip.p0");
    const auto F0 = named_state_wigner(state, x0, p0, pg);
    const auto times = period_times(r.size("roundtrip.times"));
    const std::string g0_state = r.s("roundtrip.g0_state").empty() ? state : r.s("roundtrip.g0_state");
    const auto G0 = g0_state == state ? F0 : named_state_wigner(g0_state, x0, p0, pg);
    const auto g0 = profile_from_initial(G0, 0.0, times);
    std::optional<TimeProfile> gL;
    if (const auto aL = r.opt("roundtrip.gL_anchor")) gL = profile_from_initial(G0, *aL, times);
    const auto red = r.timed("redundancy", [&] { return check_redundancy(F0, g0, gL, r.d("roundtrip.redundancy_tolerance")); });
    json j{{"state", state}, {"g0_state", g0_state}, {"conflict_0", red.conflict_0}, {"consistent", red.consistent},
           {"redundancy_tolerance", red.tolerance}};
    if (red.conflict_L) j["conflict_L"] = *red.conflict_L;
    io::write_json(r.file("redundancy.json"), j);
    if (!red.consistent) {
        r.summary = j;
        throw Refusal("initial field and boundary profiles are mutually inconsistent (conflict " +
                      std::to_string(red.conflict_0) + ")");
    }
    io::write_time_profile(r.dir(), g0, "g0");
    for (std::size_t m = 0; m < times.size(); ++m) {
        char name[32];
        std::snprintf(name, sizeof name, "g0_%04zu.csv", m);
        r.note_output(name);
    }
    r.note_output("g0_manifest.json");
    const auto R = r.timed("reconstruct", [&] { return initial_from_profile(g0, pg); });
    r.write_field("reconstructed", R);
    const double diff = sup_distance(R, F0), tol = r.d("roundtrip.tolerance");
    const auto probe = wigner_property_probe(R);
    j["round_trip_error"] = diff;
    j["probe"] = {{"normalization_defect", probe.normalization_defect},
                  {"sup_abs", probe.sup_abs},
                  {"bound", probe.bound},
                  {"min_coherent_overlap", probe.min_coherent_overlap},
                  {"passes", probe.passes}};
    r.log("round-trip error " + std::to_string(diff));
    r.check("round_trip", diff <= tol, {{"value", diff}, {"tolerance", tol}});
    r.check("reconstruction_probe", probe.passes);
    r.summary = j;
    return kOk;
}

int confined_stationarity(Run& r) {
    const double L = r.d("confined.L"), m = r.d("phys.mass"), hbar = r.hbar();
    const double P = r.d("confined.p_band"), margin = r.d("confined.margin"), cells = r.d("confined.eps_cells");
    const int level = static_cast<int>(r.n("confined.level"));
    auto csv = io::open_out(r.file("stationarity.csv"));
    csv << "n,dx,epsilon,relative,relative_without_boundary,edge\n";
    json rows = json::array();
    double prev = 0;
    for (double nd : r.list("confined.sizes")) {
        const auto n = static_cast<std::size_t>(nd);
        const Grid1D g(r.d("grid.x_min"), r.d("grid.x_max"), n, hbar);
        const auto pg = PhaseGrid::wigner_dual(g);
        const auto W = r.timed("wigner", [&] { return wigner_transform(box_eigenstate(level, L, g, 0.0, m).state, pg); });
        const auto V = Potential::zero(pg);
        const double eps = cells * g.dx();
        const double k = hbar * hbar / (2 * m);
        const std::vector<BoundaryPotentialSpec> specs{{0, L, eps, k, Side::left}, {0, L, eps, k, Side::right}};
        MoyalOptions opt;
        opt.mass = m;
        const auto with = r.timed("rhs", [&] { return stationarity_residual(W, V, specs, {0, L}, margin, P, opt); });
        const auto without = r.timed("rhs", [&] { return stationarity_residual(W, V, {}, {0, L}, margin, P, opt); });
        csv << n << ',' << g.dx() << ',' << eps << ',' << with.relative << ',' << without.relative << ',' << with.edge << '\n';
        rows.push_back({{"n", n}, {"epsilon", eps}, {"relative", with.relative}, {"relative_without_boundary", without.relative}});
        r.log("n=" + std::to_string(n) + " relative residual " + std::to_string(with.relative) + " (no boundary terms " +
              std::to_string(without.relative) + ")");
        const std::string tag = "n" + std::to_string(n);
        r.check("boundary_terms_help_" + tag, with.relative < without.relative,
                {{"with", with.relative}, {"without", without.relative}});
        if (prev > 0)
            r.check("converges_" + tag, prev / with.relative >= r.d("confined.min_ratio"), {{"ratio", prev / with.relative}});
        prev = with.relative;
    }
    r.summary = {{"L", L}, {"level", level}, {"p_band", P}, {"rows", rows}};
    return kOk;
}

int closest_wigner(Run& r) {
    const auto pg = PhaseGrid::balanced(r.size("grid.n_x"), r.hbar());
    const std::string field = r.s("approx.field");
    const int N_max = static_cast<int>(r.n("approx.N_max"));
    const double eps = r.d("approx.eps"), wtol = r.d("approx.wigner_tolerance");
    RealField F(pg);
    if (field == "ho-mix") {
        F = harmonic_wigner(0, pg);
        F += -r.d("approx.mix") * harmonic_wigner(1, pg);
    } else if (field == "coherent") {
        F = coherent_wigner(r.d("approx.x0"), r.d("approx.p0"), pg);
    } else if (field == "bulk") {
        const double L = r.d("approx.L");
        const auto phi = box_eigenstate(1, L, pg.x()).state;
        const auto chi = box_eigenstate(1, L, pg.x(), L).state.scaled(r.d("approx.chi_weight"));
        F = assemble_bulk(phi, chi, Interval{0.0, L}, pg);
    } else {
        throw ConfigError("approx.field must be ho-mix, coherent or bulk");
    }
    const HermiteBasis basis(pg.x(), N_max, r.d("approx.center"));
    const auto full = r.timed("coefficients", [&] { return coefficients(F, basis); });
    const auto cp = r.timed("closest_pure", [&] { return closest_pure(F, basis, eps); });
    const auto pp = r.timed("positive_part", [&] { return positive_part(F, basis, eps); });
    std::vector<int> orders;
    for (double o : r.list("approx.orders")) {
        if (o < 1 || o > N_max) throw ConfigError("approx.orders must lie in [1, approx.N_max]");
        orders.push_back(static_cast<int>(o));
    }
    const auto ladder = r.timed("ladder", [&] { return monotonicity_probe(full, orders); });

    io::write_json(r.file("certificate.json"), io::certificate_json(cp.certificate));
    r.write_field("closest_wigner", cp.wigner);
    r.write_field("positive_part", pp.field);
    write_state_csv(r.file("closest_state.csv"), cp.psi);
    auto lf = io::open_out(r.file("ladder.csv"));
    lf << "N,lambda_1,lambda_2,lambda_minus_1,tail\n";
    for (const auto& row : ladder.rows)
        lf << row.N << ',' << row.lambda_1 << ',' << row.lambda_2 << ',' << row.lambda_m1 << ',' << row.tail << '\n';

    const auto wc = wigner_checks(cp.wigner, &cp.psi);
    const double worst = std::max({wc["normalization_defect"].get<double>(), wc["self_moyal_defect"].get<double>(),
                                   wc["bound_excess"].get<double>(), wc["position_marginal_defect"].get<double>()});
    r.check("output_is_wigner", worst <= wtol, {{"value", worst}});
    r.check("ladder_monotone", ladder.monotone);
    r.check("ladder_bound", ladder.bound_respected, {{"worst_ratio", ladder.worst_bound_ratio}});
    json j{{"field", field}, {"certificate", io::certificate_json(cp.certificate)}, {"wigner_checks", wc},
           {"positive_weights", pp.weights}, {"ladder_worst_bound_ratio", ladder.worst_bound_ratio},
           {"hermiticity_defect", full.hermiticity_defect}};
    if (field == "ho-mix") {
        const auto W0 = harmonic_wigner(0, pg);
        const double d0 = sup_distance(cp.wigner, W0), dp = sup_distance(pp.field, W0);
        const double lam = cp.certificate.lambda_1;
        r.check("lambda_1_is_one", std::abs(lam - 1) <= r.d("approx.lambda_tolerance"), {{"value", lam}});
        r.check("closest_is_ground_state", d0 <= wtol, {{"value", d0}});
        r.check("positive_part_is_ground_state", dp <= wtol, {{"value", dp}});
        j["distance_to_ground_state"] = d0;
        j["positive_part_distance"] = dp;
    }
    r.log("N = " + std::to_string(cp.certificate.N) + ", lambda_1 = " + std::to_string(cp.certificate.lambda_1) +
          ", tail = " + std::to_string(cp.certificate.tail));
    r.summary = j;
    return kOk;
}

const std::map<std::string, std::function<int(Run&)>>& commands() {
    static const std::map<std::string, std::function<int(Run&)>> c{
        {"box-wigner", box_wigner},
        {"stargen-residual", stargen_residual},
        {"eigen-solve", eigen_solve},
        {"positivity-demo", positivity_demo},
        {"profile-check", profile_check},
        {"profile-realize", profile_realize},
        {"profile-compat", profile_compat},
        {"ho-flow", ho_flow},
        {"profile-roundtrip", profile_roundtrip},
        {"confined-stationarity", confined_stationarity},
        {"closest-wigner", closest_wigner}};
    return c;
}

std::string subcommand_list() {
    std::string s;
    for (const auto& [name, fn] : commands()) s += "  " + name + "\n";
    return s;
}

bool is_input_error(const std::exception& e) {
    return dynamic_cast<const DomainError*>(&e) || dynamic_cast<const ResolutionError*>(&e) ||
           dynamic_cast<const NonlocalityError*>(&e) || dynamic_cast<const DimensionError*>(&e) ||
           dynamic_cast<const io::IoError*>(&e) || dynamic_cast<const ConfigError*>(&e) ||
           dynamic_cast<const Refusal*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wigner-function toolkit for confined quantum devices"};
    app.footer("Subcommands:\n" + subcommand_list() +
               "\nExit codes: 0 ok, 1 check failed or computation error, 2 usage error, 3 invalid configuration or input");
    std::string sub, config_path, out_dir = "wigdev_out";
    std::vector<std::string> overrides;
    bool quiet = false;
    app.add_option("subcommand", sub, "Subcommand to run")->required();
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--override", overrides, "key=value, repeatable")->take_all();
    app.add_flag("--quiet", quiet, "Suppress progress output");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (!commands().count(sub)) {
        std::cerr << "unknown subcommand '" << sub << "'\n" << "available:\n" << subcommand_list();
        return kUsage;
    }

    Config eff;
    try {
        Config given = config_path.empty() ? Config{} : Config::load(config_path);
        for (const auto& o : overrides) given.apply_override(o);
        eff = effective_config(sub, given);
    } catch (const ConfigError& e) {
        std::cerr << json{{"subcommand", sub}, {"exit_code", kValidation}, {"message", e.what()}}.dump() << '\n';
        return kValidation;
    }

    Run run(sub, eff, out_dir, quiet);
    int code = kOk;
    std::string message;
    try {
        fs::create_directories(out_dir);
        code = commands().at(sub)(run);
        if (code == kOk && !run.all_passed()) code = kAssertion;
    } catch (const std::exception& e) {
        message = e.what();
        code = is_input_error(e) ? kValidation : kAssertion;
    }
    try {
        run.write_manifest(code, message);
    } catch (const std::exception& e) {
        std::cerr << "cannot write manifest: " << e.what() << '\n';
        if (code == kOk) code = kAssertion;
    }
    if (!quiet) std::cout << sub << ": " << (code == kOk ? "ok" : "exit " + std::to_string(code)) << '\n';
    return code;
}
