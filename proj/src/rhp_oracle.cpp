#include "rhpw/rhp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "rhpw/scalar_rhp.hpp"

namespace rhpw {

namespace {

// Local frequency of the exponential factor in the jump.
std::function<double(double)> jump_frequency(const SpectralData& data, double x, double t, JumpMode mode)
{
    if (mode == JumpMode::raw) return [x, t](double k) { return 2.0 * std::abs(x + 4.0 * k * t); };
    const BranchPoints bp = data.branch();
    const CriticalPoints cp = critical_points(data.triple(), x / t);
    return [bp, cp, t](double k) {
        const Side side = (k > bp.E1 && k < bp.E2) ? Side::plus : Side::none;
        return 2.0 * t * std::abs(eval_dg(cp, bp, k, side));
    };
}

void add_piece(Mesh& mesh, double a, double b, bool grade_a, bool grade_b, double max_len, int tag,
               const std::function<double(double)>& omega, const ContourOptions& opt)
{
    const double len = b - a;
    const int levels = opt.levels + int(std::lround(2.0 * std::log2(opt.refine)));
    const double phase_cap = opt.panel_phase / opt.refine;
    const double len_cap = max_len / opt.refine;

    struct Raw {
        double lo, hi;
        bool dyadic;
    };
    std::vector<Raw> raw;
    double lo = a, hi = b;
    std::vector<Raw> tail;
    if (grade_a) {
        double e = 0.25 * len;
        std::vector<Raw> left;
        for (int l = 0; l < levels; ++l, e *= 0.5) left.push_back({a + 0.5 * e, a + e, true});
        left.push_back({a, a + e, true});
        raw.insert(raw.end(), left.rbegin(), left.rend());
        lo = a + 0.25 * len;
    }
    if (grade_b) {
        double e = 0.25 * len;
        for (int l = 0; l < levels; ++l, e *= 0.5) tail.push_back({b - e, b - 0.5 * e, true});
        tail.push_back({b - e, b, true});
        hi = b - 0.25 * len;
    }
    if (hi > lo) raw.push_back({lo, hi, false});
    raw.insert(raw.end(), tail.begin(), tail.end());

    for (const auto& r : raw) {
        const double w = r.hi - r.lo;
        double wmax = 0.0;
        for (double f : {1.0 / 6.0, 0.5, 5.0 / 6.0}) wmax = std::max(wmax, omega(r.lo + f * w));
        int pieces = std::max(1, int(std::ceil(std::max(wmax * w / phase_cap, w / len_cap))));
        if (r.dyadic && wmax * w <= phase_cap * opt.inner_order / opt.order && w <= len_cap) {
            mesh.add_panel({r.lo, r.hi, opt.inner_order, tag});
            continue;
        }
        for (int i = 0; i < pieces; ++i)
            mesh.add_panel({r.lo + w * i / pieces, i + 1 == pieces ? r.hi : r.lo + w * (i + 1) / pieces, opt.order, tag});
    }
}

}  // namespace

Contour build_contour(const SpectralData& data, double x, double t, JumpMode mode, const ContourOptions& opt)
{
    if (!(t > 0.0) || x < 0.0) throw SectorError("oracle: need t > 0 and x >= 0");
    const BranchPoints& bp = data.branch();
    const TaperOptions& T = data.taper();
    if (!T.enabled) throw std::invalid_argument("oracle: spectral data must have compact support");
    const double zero = T.zero_point > 0.0 ? T.zero_point : bp.kappa_plus;
    const double ks = bp.E2 + T.delta_right;

    Contour c;
    c.left = data.support_left();
    c.right = data.support_right();
    c.breakpoints = {c.left, bp.E1 - T.delta_left, bp.E1, bp.E2, ks, ks + T.ramp, zero, c.right};
    auto omega = jump_frequency(data, x, t, mode);
    const auto& B = c.breakpoints;
    for (std::size_t i = 0; i + 1 < B.size(); ++i) {
        const double a = B[i], b = B[i + 1];
        if (!(b > a)) continue;
        const bool ga = a == bp.E1 || a == bp.E2;
        const bool gb = b == bp.E1 || b == bp.E2;
        const int tag = (a == bp.E1 && b == bp.E2) ? 1 : 0;
        // Taper windows get at least four panels.
        const bool window = i == 0 || a == ks || a == zero;
        const double max_len = window ? (b - a) / 4.0 : 0.25;
        add_piece(c.mesh, a, b, ga, gb, max_len, tag, omega, opt);
    }
    return c;
}

JumpFn assemble_jump(const SpectralData& data, double x, double t, JumpMode mode)
{
    const BranchPoints bp = data.branch();
    auto shared = std::make_shared<SpectralData>(data);
    if (mode == JumpMode::raw) {
        return [shared, bp, x, t](cplx kc, int) -> Mat2 {
            const double k = kc.real();
            Mat2 v = Mat2::Identity();
            const bool cut = k > bp.E1 && k < bp.E2;
            const SpectralPoint p = spectral_point(bp, k, cut ? Side::plus : Side::none);
            const cplx r = shared->r(p);
            if (r == 0.0) return v;
            const cplx e = std::polar(1.0, 2.0 * (k * x + 2.0 * k * k * t));
            v(0, 0) = cut ? 0.0 : shared->one_minus_abs_r2(p);
            v(0, 1) = std::conj(r) / e;
            v(1, 0) = -r * e;
            return v;
        };
    }
    const CriticalPoints cp = critical_points(data.triple(), x / t);
    return [shared, bp, cp, t](cplx kc, int) -> Mat2 {
        const double k = kc.real();
        Mat2 v = Mat2::Identity();
        const bool cut = k > bp.E1 && k < bp.E2;
        const SpectralPoint p = spectral_point(bp, k, cut ? Side::plus : Side::none);
        const cplx r = shared->r(p);
        if (cut) {
            const cplx gp = eval_g(cp, bp, p);
            v(0, 0) = 0.0;
            v(0, 1) = std::conj(r);
            v(1, 0) = -r;
            v(1, 1) = std::exp(-2.0 * I * t * gp);
            return v;
        }
        if (r == 0.0) return v;
        const cplx e = std::polar(1.0, 2.0 * t * eval_g(cp, bp, p).real());
        v(0, 0) = shared->one_minus_abs_r2(p);
        v(0, 1) = std::conj(r) / e;
        v(1, 0) = -r * e;
        return v;
    };
}

cplx extract_u(const Mat2& m1, cplx D0inf, cplx phase) { return -2.0 * I * D0inf * D0inf * phase * m1(0, 1); }

Oracle::Oracle(const SpectralData& data, const OracleOptions& opt) : data_(data), opt_(opt)
{
    d0inf_ = DFunction(data_, 0.0).at_infinity();
}

OracleResult Oracle::solve(double x, double t, JumpMode mode) const
{
    return solve_on(build_contour(data_, x, t, mode, opt_.contour).mesh, x, t, mode);
}

OracleResult Oracle::solve_on(const Mesh& mesh, double x, double t, JumpMode mode) const
{
    if (!(t > 0.0) || x < 0.0) throw SectorError("oracle: need t > 0 and x >= 0");
    JumpFn v = assemble_jump(data_, x, t, mode);
    RHSolution sol = solve_rhp(mesh, v, opt_.solver);
    OracleResult res;
    res.x = x;
    res.t = t;
    res.mode = mode;
    res.m1 = sol.moment(1);
    cplx phase = 1.0;
    if (mode == JumpMode::g_conjugated) {
        const double ginf = critical_points(data_.triple(), x / t).g_inf;
        phase = std::polar(1.0, 2.0 * t * ginf);
    }
    res.u = extract_u(res.m1, d0inf_, phase);
    res.probe = sol.probe(v, opt_.probe_points);
    res.rcond = sol.rcond();
    res.residual = sol.residual();
    res.nodes = mesh.size();
    if (!(res.probe < opt_.probe_tol)) {
        std::ostringstream os;
        os << "oracle: jump probe " << res.probe << " above tolerance " << opt_.probe_tol << " at x=" << x
           << ", t=" << t;
        throw ConvergenceError(os.str());
    }
    return res;
}

cplx Oracle::ux(double x, double t, double h, JumpMode mode) const
{
    auto u = [&](double xx) { return solve(xx, t, mode).u; };
    return (u(x - 2.0 * h) - 8.0 * u(x - h) + 8.0 * u(x + h) - u(x + 2.0 * h)) / (12.0 * h);
}

std::vector<cplx> nls_residual(const Lattice& lat)
{
    std::vector<cplx> res;
    if (lat.nx < 3 || lat.nt < 3) return res;
    for (int i = 1; i + 1 < lat.nx; ++i)
        for (int j = 1; j + 1 < lat.nt; ++j) {
            const cplx u = lat.at(i, j);
            const cplx ut = (lat.at(i, j + 1) - lat.at(i, j - 1)) / (2.0 * lat.ht);
            const cplx uxx = (lat.at(i + 1, j) - 2.0 * u + lat.at(i - 1, j)) / (lat.hx * lat.hx);
            res.push_back(I * ut + uxx - 2.0 * std::norm(u) * u);
        }
    return res;
}

void write_solution_csv(std::ostream& os, const std::vector<OracleResult>& rows, const std::vector<double>& residuals)
{
    os << "# schema=1\nx,t,re_u,im_u,residual,condition\n" << std::setprecision(17);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const double res = i < residuals.size() ? residuals[i] : r.residual;
        os << r.x << ',' << r.t << ',' << r.u.real() << ',' << r.u.imag() << ',' << res << ','
           << (r.rcond > 0.0 ? 1.0 / r.rcond : 0.0) << '\n';
    }
}

std::string mesh_cache_key(const SpectralData& data, double zeta, double t, JumpMode mode, const ContourOptions& opt)
{
    // Meshes only depend on t through the frequency bound, so t is bucketed.
    const ParameterTriple& p = data.triple();
    std::ostringstream os;
    os << std::setprecision(12) << "b" << p.beta << "_w" << p.omega << "_z" << zeta << "_t"
       << std::ceil(t) << (mode == JumpMode::raw ? "_raw" : "_g") << "_o" << opt.order << "_i" << opt.inner_order << "_l"
       << opt.levels << "_p" << opt.panel_phase << "_r" << opt.refine;
    const TaperOptions& T = data.taper();
    os << "_tp" << T.delta_left << ',' << T.width_left << ',' << T.delta_right << ',' << T.ramp << ',' << T.zero_point
       << ',' << T.cutoff_width;
    return os.str();
}

bool save_mesh(const std::string& path, const Mesh& mesh)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) return false;
    const std::uint64_t n = mesh.panels().size();
    f.write(reinterpret_cast<const char*>(&n), sizeof n);
    for (const auto& p : mesh.panels()) {
        const double v[4] = {p.a.real(), p.a.imag(), p.b.real(), p.b.imag()};
        const std::int32_t meta[2] = {p.order, p.tag};
        f.write(reinterpret_cast<const char*>(v), sizeof v);
        f.write(reinterpret_cast<const char*>(meta), sizeof meta);
    }
    return bool(f);
}

bool load_mesh(const std::string& path, Mesh& mesh)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    std::uint64_t n = 0;
    if (!f.read(reinterpret_cast<char*>(&n), sizeof n)) return false;
    Mesh m;
    for (std::uint64_t i = 0; i < n; ++i) {
        double v[4];
        std::int32_t meta[2];
        if (!f.read(reinterpret_cast<char*>(v), sizeof v) || !f.read(reinterpret_cast<char*>(meta), sizeof meta))
            return false;
        m.add_panel({cplx(v[0], v[1]), cplx(v[2], v[3]), meta[0], meta[1]});
    }
    mesh = std::move(m);
    return true;
}

}  // namespace rhpw
