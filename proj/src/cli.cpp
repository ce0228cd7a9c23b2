#include "rhpw/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rhpw/model_cross.hpp"
#include "rhpw/parallel.hpp"

namespace rhpw {

using nlohmann::json;

namespace {

const std::set<std::string> commands = {"validate", "asymptotics", "oracle", "compare", "cross-check"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            throw ConfigError("unknown key '" + key + "' in " + where + " (allowed: " + list + ")");
        }
}

double get_num(const json& obj, const std::string& key, double def)
{
    if (!obj.contains(key)) return def;
    if (!obj[key].is_number()) throw ConfigError("'" + key + "' must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& key, int def)
{
    if (!obj.contains(key)) return def;
    if (!obj[key].is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
    return obj[key].get<int>();
}

std::vector<double> get_list(const json& obj, const std::string& key)
{
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const json& a = obj[key];
    if (a.is_number()) return {a.get<double>()};
    if (!a.is_array()) throw ConfigError("'" + key + "' must be a number or an array of numbers");
    for (const auto& v : a) {
        if (!v.is_number()) throw ConfigError("'" + key + "' must contain numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

std::ofstream open_out(const std::string& dir, const std::string& name)
{
    std::ofstream f(std::filesystem::path(dir) / name);
    if (!f) throw std::runtime_error("cannot write " + (std::filesystem::path(dir) / name).string());
    f << std::setprecision(17);
    return f;
}

SpectralData make_data(const RunConfig& cfg) { return SpectralData(cfg.triple, cfg.tau, cfg.taper); }

// Oracle solve, reusing a cached mesh built for the next integer time when a
// cache directory is configured. The contour frequency grows with t at fixed
// zeta, so that mesh resolves every t in its bucket.
OracleResult oracle_solve(const RunConfig& cfg, const Oracle& O, double x, double t)
{
    if (cfg.mesh_cache.empty()) return O.solve(x, t);
    const double zeta = x / t;
    const double T = std::ceil(t);
    const auto& copt = cfg.oracle.contour;
    const std::string path =
        (std::filesystem::path(cfg.mesh_cache) / (mesh_cache_key(O.data(), zeta, t, JumpMode::g_conjugated, copt) + ".mesh"))
            .string();
    Mesh mesh;
    if (!load_mesh(path, mesh)) {
        mesh = build_contour(O.data(), zeta * T, T, JumpMode::g_conjugated, copt).mesh;
        std::filesystem::create_directories(cfg.mesh_cache);
        save_mesh(path, mesh);
    }
    return O.solve_on(mesh, x, t);
}

std::vector<OracleResult> oracle_sweep(const RunConfig& cfg, const Oracle& O)
{
    const auto pts = cfg.points();
    std::vector<OracleResult> rows(pts.size());
    parallel_for(int(pts.size()), [&](int i) { rows[i] = oracle_solve(cfg, O, pts[i].first, pts[i].second); });
    return rows;
}

// Points grouped by zeta = x/t (rounded), in first-seen order.
std::vector<std::vector<std::size_t>> zeta_groups(const std::vector<std::pair<double, double>>& pts)
{
    std::vector<std::vector<std::size_t>> groups;
    std::vector<double> keys;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double z = pts[i].first / pts[i].second;
        std::size_t g = 0;
        while (g < keys.size() && std::abs(keys[g] - z) > 1e-12 * (1.0 + std::abs(z))) ++g;
        if (g == keys.size()) {
            keys.push_back(z);
            groups.emplace_back();
        }
        groups[g].push_back(i);
    }
    return groups;
}

int run_validate(const RunConfig& cfg, const std::string& out, std::ostream& log)
{
    SpectralData data = make_data(cfg);
    const AssumptionReport rep = validate_assumptions(data);
    {
        auto f = open_out(out, "assumptions.txt");
        print_report(f, rep);
    }
    print_report(log, rep);
    const double a = data.support_left() - 0.2, b = data.support_right() + 0.2;
    std::vector<double> grid(cfg.r_samples);
    for (int i = 0; i < cfg.r_samples; ++i) grid[i] = a + (b - a) * i / (cfg.r_samples - 1);
    auto f = open_out(out, "r_samples.csv");
    write_samples_csv(f, sample_r(data, grid));
    return rep.all_pass() ? exit_ok : exit_validation;
}

int run_asymptotics(const RunConfig& cfg, const std::string& out, std::ostream& log)
{
    Asymptotics A(make_data(cfg), cfg.dquad, cfg.psi);
    const auto pts = cfg.points();
    std::vector<AsymptoticExpansion> u(pts.size()), ux(pts.size());
    parallel_for(int(pts.size()), [&](int i) {
        const auto [x, t] = pts[i];
        const LocalData loc = A.local(x / t);
        u[i] = A.u(loc, x, t);
        ux[i] = A.ux(loc, x, t);
    });
    auto f = open_out(out, "asymptotics.csv");
    f << "# schema=1\nx,t,zeta,re_u,im_u,re_u_leading,im_u_leading,re_ua,im_ua,re_ux,im_ux,re_ux_leading,"
         "im_ux_leading,re_ub,im_ub,ua_discrepancy,ub_discrepancy\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto [x, t] = pts[i];
        const cplx a = u[i].value(), b = ux[i].value();
        f << x << ',' << t << ',' << x / t << ',' << a.real() << ',' << a.imag() << ',' << u[i].leading.real() << ','
          << u[i].leading.imag() << ',' << u[i].sub.real() << ',' << u[i].sub.imag() << ',' << b.real() << ','
          << b.imag() << ',' << ux[i].leading.real() << ',' << ux[i].leading.imag() << ',' << ux[i].sub.real() << ','
          << ux[i].sub.imag() << ',' << u[i].discrepancy << ',' << ux[i].discrepancy << '\n';
    }
    log << "asymptotics: " << pts.size() << " points\n";
    return exit_ok;
}

int run_oracle(const RunConfig& cfg, const std::string& out, std::ostream& log)
{
    Oracle O(make_data(cfg), cfg.oracle);
    const auto rows = oracle_sweep(cfg, O);
    {
        auto f = open_out(out, "oracle.csv");
        write_solution_csv(f, rows);
    }
    if (cfg.ux_step > 0.0) {
        const auto pts = cfg.points();
        std::vector<cplx> ux(pts.size());
        parallel_for(int(pts.size()), [&](int i) { ux[i] = O.ux(pts[i].first, pts[i].second, cfg.ux_step); });
        auto f = open_out(out, "oracle_ux.csv");
        f << "# schema=1\nx,t,re_ux,im_ux\n";
        for (std::size_t i = 0; i < pts.size(); ++i)
            f << pts[i].first << ',' << pts[i].second << ',' << ux[i].real() << ',' << ux[i].imag() << '\n';
    }
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.probe);
    log << "oracle: " << rows.size() << " solves, max probe " << worst << '\n';
    return exit_ok;
}

struct ErrorTable {
    std::vector<double> lead, two;
};

ErrorTable oracle_errors(const RunConfig& cfg, const std::vector<OracleResult>& rows, PsiConvention conv)
{
    Asymptotics A(make_data(cfg), cfg.dquad, conv);
    ErrorTable e;
    for (const auto& r : rows) {
        const auto u = A.u(r.x, r.t);
        e.lead.push_back(std::abs(r.u - u.leading));
        e.two.push_back(std::abs(r.u - u.value()));
    }
    return e;
}

json fit_group(const RunConfig& cfg, const std::vector<OracleResult>& rows, const ErrorTable& e,
               const std::vector<std::size_t>& idx)
{
    std::vector<double> t, lead, two;
    double K = 0.0;
    bool better = true;
    for (std::size_t i : idx) {
        t.push_back(rows[i].t);
        lead.push_back(e.lead[i]);
        two.push_back(e.two[i]);
        K = std::max(K, e.two[i] * rows[i].t / std::log(rows[i].t));
        better = better && e.two[i] < e.lead[i];
    }
    json g;
    g["zeta"] = rows[idx.front()].x / rows[idx.front()].t;
    g["zeta_fraction"] = g["zeta"].get<double>() / cfg.c0;
    g["points"] = idx.size();
    g["two_term_better_everywhere"] = better;
    g["K"] = K;
    if (std::set<double>(t.begin(), t.end()).size() >= 2 && std::all_of(t.begin(), t.end(), [](double s) { return s > 1.0; })) {
        g["rate_leading"] = fit_log_rate(t, lead);
        g["rate_two_term"] = fit_log_rate(t, two);
    }
    return g;
}

int run_compare(const RunConfig& cfg, const std::string& out, std::ostream& log)
{
    Oracle O(make_data(cfg), cfg.oracle);
    const auto rows = oracle_sweep(cfg, O);
    const ErrorTable e = oracle_errors(cfg, rows, cfg.psi);
    {
        auto f = open_out(out, "compare.csv");
        f << "# schema=1\nx,t,zeta,err_leading,err_two_term,ln_t_over_t\n";
        for (std::size_t i = 0; i < rows.size(); ++i)
            f << rows[i].x << ',' << rows[i].t << ',' << rows[i].x / rows[i].t << ',' << e.lead[i] << ',' << e.two[i]
              << ',' << std::log(rows[i].t) / rows[i].t << '\n';
    }
    json fits = json::array();
    for (const auto& g : zeta_groups(cfg.points())) fits.push_back(fit_group(cfg, rows, e, g));
    auto f = open_out(out, "compare_fit.json");
    f << fits.dump(2) << '\n';
    log << fits.dump(2) << '\n';
    return exit_ok;
}

int run_cross_check(const RunConfig& cfg, const std::string& out, std::ostream& log)
{
    json res;
    json bx = json::array();
    for (cplx q : cfg.cross_q) {
        const CrossSolution c = solve_cross(q);
        const cplx num = -c.m1(0, 1);
        json row;
        row["q"] = cjson(q);
        row["formula"] = cjson(c.datum.betaX);
        row["numeric"] = cjson(num);
        row["rel_error"] = std::abs(c.datum.betaX) > 0.0 ? std::abs(num - c.datum.betaX) / std::abs(c.datum.betaX)
                                                         : std::abs(num);
        bx.push_back(row);
    }
    res["beta_x"] = bx;

    SpectralData data = make_data(cfg);
    const auto pts = cfg.points();
    {
        Asymptotics A(data, cfg.dquad, cfg.psi);
        double worst = 0.0;
        for (const auto& [x, t] : pts) {
            const LocalData loc = A.local(x / t);
            const cplx ub = A.ux(loc, x, t).sub;
            worst = std::max(worst, std::abs(ub - A.ub_alt(loc, x, t)) / (1.0 + std::abs(ub)));
        }
        res["ub_alt_max_rel_diff"] = worst;
    }

    Oracle O(data, cfg.oracle);
    const auto rows = oracle_sweep(cfg, O);
    json disc = json::array();
    for (const auto& g : zeta_groups(pts)) {
        json entry;
        std::vector<std::string> pass;
        for (PsiConvention conv : {PsiConvention::definition, PsiConvention::closed_form}) {
            const std::string name = conv == PsiConvention::definition ? "definition" : "closed_form";
            const json fit = fit_group(cfg, rows, oracle_errors(cfg, rows, conv), g);
            entry["zeta"] = fit["zeta"];
            entry[name] = fit;
            if (fit.contains("rate_two_term") && std::abs(fit["rate_two_term"].get<double>() + 1.0) <= 0.25)
                pass.push_back(name);
        }
        entry["selected"] = pass.size() == 1 ? pass.front() : (pass.empty() ? "neither" : "both");
        disc.push_back(entry);
    }
    res["psi_discriminator"] = disc;
    auto f = open_out(out, "cross_check.json");
    f << res.dump(2) << '\n';
    log << res.dump(2) << '\n';
    return exit_ok;
}

}  // namespace

std::vector<std::pair<double, double>> RunConfig::points() const
{
    std::vector<std::pair<double, double>> p;
    if (!x.empty()) {
        for (double xx : x)
            for (double tt : t) p.emplace_back(xx, tt);
    } else {
        for (double z : zeta)
            for (double tt : t) p.emplace_back(z * tt, tt);
    }
    return p;
}

double fit_log_rate(const std::vector<double>& t, const std::vector<double>& err)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = double(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double X = std::log(t[i]), Y = std::log(err[i] / std::log(t[i]));
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RunConfig parse_config(const std::string& text, const std::string& command)
{
    if (!commands.count(command))
        throw ConfigError("unknown subcommand '" + command + "' (validate, asymptotics, oracle, compare, cross-check)");
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"beta", "alpha", "omega", "tau", "c0_fraction", "zeta", "zeta_fraction", "x", "t", "psi_convention",
                    "taper", "d_quadrature", "mesh", "solver", "probe_tol", "probe_points", "ux_step", "cross_q",
                    "r_samples", "mesh_cache"},
                   "config");

    RunConfig cfg;
    cfg.command = command;
    if (!j.contains("omega") || (!j.contains("beta") && !j.contains("alpha")))
        throw ConfigError("required fields: omega and one of beta, alpha");
    if (j.contains("beta") && j.contains("alpha")) throw ConfigError("give either beta or alpha, not both");
    const double omega = get_num(j, "omega", 0.0);
    try {
        cfg.triple = j.contains("beta") ? derive_triple(get_num(j, "beta", 0.0), omega)
                                        : triple_from_alpha(get_num(j, "alpha", 0.0), omega);
    } catch (const InadmissibleParameters& e) {
        std::ostringstream os;
        os << e.what() << "; admissible interval: −12β² < ω < −4β²";
        if (j.contains("beta")) {
            const double b = get_num(j, "beta", 0.0);
            os << " = (" << -12.0 * b * b << ", " << -4.0 * b * b << ")";
        }
        throw ConfigError(os.str());
    }
    cfg.tau = get_num(j, "tau", cfg.tau);
    cfg.c0_fraction = get_num(j, "c0_fraction", cfg.c0_fraction);
    if (!(cfg.c0_fraction > 0.0 && cfg.c0_fraction < 1.0)) throw ConfigError("c0_fraction must lie in (0, 1)");
    cfg.c0 = cfg.c0_fraction * sector_limit(cfg.triple);

    cfg.t = get_list(j, "t");
    cfg.x = get_list(j, "x");
    cfg.zeta = get_list(j, "zeta");
    const auto zf = get_list(j, "zeta_fraction");
    if (!cfg.zeta.empty() && !zf.empty()) throw ConfigError("give either zeta or zeta_fraction, not both");
    for (double f : zf) cfg.zeta.push_back(f * cfg.c0);
    if (!cfg.x.empty() && !cfg.zeta.empty()) throw ConfigError("give either x or zeta/zeta_fraction, not both");
    if (command != "validate" && (cfg.t.empty() || (cfg.x.empty() && cfg.zeta.empty())))
        throw ConfigError("empty grids: '" + command + "' needs t and one of x, zeta, zeta_fraction");
    for (double t : cfg.t)
        if (!(t > 0.0)) throw ConfigError("t values must be positive");
    for (double z : cfg.zeta)
        if (!(z >= 0.0 && z <= cfg.c0 * (1.0 + 1e-14)))
            throw ConfigError("zeta values must lie in [0, c0] with c0 = " + std::to_string(cfg.c0));
    for (double x : cfg.x)
        for (double t : cfg.t)
            if (!(x >= 0.0 && x / t <= cfg.c0 * (1.0 + 1e-14)))
                throw ConfigError("every x/t must lie in [0, c0] with c0 = " + std::to_string(cfg.c0));

    if (j.contains("psi_convention")) {
        const json& p = j["psi_convention"];
        if (p == "definition") cfg.psi = PsiConvention::definition;
        else if (p == "closed_form") cfg.psi = PsiConvention::closed_form;
        else throw ConfigError("psi_convention must be \"definition\" or \"closed_form\"");
    }

    auto section = [&](const char* name, const std::set<std::string>& keys) -> json {
        if (!j.contains(name)) return json::object();
        if (!j[name].is_object()) throw ConfigError(std::string("'") + name + "' must be an object");
        reject_unknown(j[name], keys, name);
        return j[name];
    };
    const json tp = section("taper", {"delta_left", "width_left", "delta_right", "ramp", "zero_point", "cutoff_width"});
    cfg.taper.delta_left = get_num(tp, "delta_left", cfg.taper.delta_left);
    cfg.taper.width_left = get_num(tp, "width_left", cfg.taper.width_left);
    cfg.taper.delta_right = get_num(tp, "delta_right", cfg.taper.delta_right);
    cfg.taper.ramp = get_num(tp, "ramp", cfg.taper.ramp);
    cfg.taper.zero_point = get_num(tp, "zero_point", cfg.taper.zero_point);
    cfg.taper.cutoff_width = get_num(tp, "cutoff_width", cfg.taper.cutoff_width);

    const json dq = section("d_quadrature", {"order", "levels", "middle"});
    cfg.dquad.order = get_int(dq, "order", cfg.dquad.order);
    cfg.dquad.levels = get_int(dq, "levels", cfg.dquad.levels);
    cfg.dquad.middle = get_int(dq, "middle", cfg.dquad.middle);

    auto& co = cfg.oracle.contour;
    const json me = section("mesh", {"order", "inner_order", "levels", "panel_phase", "refine"});
    co.order = get_int(me, "order", co.order);
    co.inner_order = get_int(me, "inner_order", co.inner_order);
    co.levels = get_int(me, "levels", co.levels);
    co.panel_phase = get_num(me, "panel_phase", co.panel_phase);
    co.refine = get_num(me, "refine", co.refine);
    for (int n : {co.order, co.inner_order, cfg.dquad.order})
        if (n < 2 || n > 128) throw ConfigError("quadrature orders must lie in [2, 128]");
    if (!(co.panel_phase > 0.0) || !(co.refine > 0.0)) throw ConfigError("mesh.panel_phase and mesh.refine must be positive");

    const json so = section("solver", {"refinement_steps", "rcond_floor"});
    cfg.oracle.solver.refinement_steps = get_int(so, "refinement_steps", cfg.oracle.solver.refinement_steps);
    cfg.oracle.solver.rcond_floor = get_num(so, "rcond_floor", cfg.oracle.solver.rcond_floor);
    cfg.oracle.probe_tol = get_num(j, "probe_tol", cfg.oracle.probe_tol);
    cfg.oracle.probe_points = get_int(j, "probe_points", cfg.oracle.probe_points);
    cfg.ux_step = get_num(j, "ux_step", 0.0);
    cfg.r_samples = get_int(j, "r_samples", cfg.r_samples);
    if (cfg.r_samples < 2) throw ConfigError("r_samples must be at least 2");

    if (j.contains("cross_q")) {
        if (!j["cross_q"].is_array()) throw ConfigError("cross_q must be an array");
        for (const auto& q : j["cross_q"]) {
            if (q.is_number()) cfg.cross_q.push_back(q.get<double>());
            else if (q.is_array() && q.size() == 2 && q[0].is_number() && q[1].is_number())
                cfg.cross_q.push_back(cplx(q[0].get<double>(), q[1].get<double>()));
            else throw ConfigError("cross_q entries must be numbers or [re, im] pairs");
        }
    } else {
        for (double a : {0.1, 0.3, 0.5})
            for (cplx d : {cplx(1.0), I, cplx(-1.0)}) cfg.cross_q.push_back(a * d);
    }
    for (cplx q : cfg.cross_q)
        if (!(std::abs(q) < 1.0)) throw ConfigError("cross_q entries must satisfy |q| < 1");
    if (j.contains("mesh_cache")) {
        if (!j["mesh_cache"].is_string()) throw ConfigError("mesh_cache must be a directory path");
        cfg.mesh_cache = j["mesh_cache"].get<std::string>();
    }

    json r;
    r["command"] = command;
    r["beta"] = cfg.triple.beta;
    r["alpha"] = cfg.triple.alpha;
    r["omega"] = cfg.triple.omega;
    r["c"] = cjson(cfg.triple.c);
    r["tau"] = cfg.tau;
    r["c0_fraction"] = cfg.c0_fraction;
    r["c0"] = cfg.c0;
    r["zeta"] = cfg.zeta;
    r["x"] = cfg.x;
    r["t"] = cfg.t;
    r["psi_convention"] = cfg.psi == PsiConvention::definition ? "definition" : "closed_form";
    r["taper"] = {{"delta_left", cfg.taper.delta_left},   {"width_left", cfg.taper.width_left},
                  {"delta_right", cfg.taper.delta_right}, {"ramp", cfg.taper.ramp},
                  {"zero_point", cfg.taper.zero_point},   {"cutoff_width", cfg.taper.cutoff_width}};
    r["d_quadrature"] = {{"order", cfg.dquad.order}, {"levels", cfg.dquad.levels}, {"middle", cfg.dquad.middle}};
    r["mesh"] = {{"order", co.order},
                 {"inner_order", co.inner_order},
                 {"levels", co.levels},
                 {"panel_phase", co.panel_phase},
                 {"refine", co.refine}};
    r["solver"] = {{"refinement_steps", cfg.oracle.solver.refinement_steps},
                   {"rcond_floor", cfg.oracle.solver.rcond_floor}};
    r["probe_tol"] = cfg.oracle.probe_tol;
    r["probe_points"] = cfg.oracle.probe_points;
    r["ux_step"] = cfg.ux_step;
    json qs = json::array();
    for (cplx q : cfg.cross_q) qs.push_back(cjson(q));
    r["cross_q"] = qs;
    r["r_samples"] = cfg.r_samples;
    r["mesh_cache"] = cfg.mesh_cache;
    cfg.resolved = r.dump(2);
    return cfg;
}

int run(const RunConfig& cfg, const std::string& out_dir, std::ostream& log)
{
    std::filesystem::create_directories(out_dir);
    {
        auto f = open_out(out_dir, "config.resolved.json");
        f << cfg.resolved << '\n';
    }
    log << std::setprecision(10);
    try {
        if (cfg.command == "validate") return run_validate(cfg, out_dir, log);
        if (cfg.command == "asymptotics") return run_asymptotics(cfg, out_dir, log);
        if (cfg.command == "oracle") return run_oracle(cfg, out_dir, log);
        if (cfg.command == "compare") return run_compare(cfg, out_dir, log);
        return run_cross_check(cfg, out_dir, log);
    } catch (const ConvergenceError& e) {
        log << "non-convergence: " << e.what() << '\n';
        return exit_convergence;
    } catch (const SectorError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_config;
    }
}

}  // namespace rhpw
