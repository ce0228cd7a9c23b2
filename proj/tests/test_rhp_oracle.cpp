#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "rhpw/rhp_oracle.hpp"

using namespace rhpw;

namespace {
const ParameterTriple P = derive_triple(1.0, -8.0);
const BranchPoints BP = branch_points(P);
const double C0 = 0.9 * sector_limit(P);

OracleOptions light()
{
    OracleOptions o;
    o.contour.levels = 20;
    return o;
}
}  // namespace

TEST_CASE("identity jump")
{
    Mesh mesh;
    mesh.add_segment(-1.0, 1.0, 0, true, true, 8, 4, 16);
    RHSolution s = solve_rhp(mesh, [](cplx, int) -> Mat2 { return Mat2::Identity(); });
    CHECK(s.moment(1).norm() == 0.0);
    CHECK(s.moment(2).norm() == 0.0);
    CHECK((s.eval(cplx(0.1, 0.2)) - Mat2::Identity()).norm() == 0.0);
    CHECK(extract_u(Mat2::Zero(), cplx(0.6, 0.8)) == 0.0);
}

TEST_CASE("first-order Born approximation")
{
    // No cut: a smooth bump reflection coefficient on [-1, 1].
    Mesh mesh;
    mesh.add_segment(-1.0, 1.0, 0, false, false, 0, 12, 16);
    auto jump = [](double eps) {
        return [eps](cplx z, int) -> Mat2 {
            const double k = z.real();
            const cplx r = eps * std::exp(-1.0 / (1.0 - k * k) + 1.0) * std::polar(1.0, 0.7 * k);
            const cplx e = std::polar(1.0, 2.0 * (0.5 * k + 2.0 * k * k));
            Mat2 v;
            v << 1.0 - std::norm(r), std::conj(r) / e, -r * e, 1.0;
            return v;
        };
    };
    double last = 0.0;
    for (double eps : {0.02, 0.01, 0.005}) {
        auto v = jump(eps);
        RHSolution s = solve_rhp(mesh, v);
        Mat2 born = Mat2::Zero();
        for (std::size_t j = 0; j < mesh.size(); ++j)
            born += -mesh.weights()[j] * (v(mesh.nodes()[j], 0) - Mat2::Identity()) / (2.0 * pi * I);
        const double err = (s.moment(1) - born).cwiseAbs().maxCoeff();
        CHECK(err < eps * eps);
        if (last > 0.0) CHECK(last / err == doctest::Approx(4.0).epsilon(0.05));
        last = err;
    }
}

TEST_CASE("contour layout")
{
    const double t = 10.0, x = 0.3 * C0 * t;
    SpectralData data(P, 0.5);
    Contour c = build_contour(data, x, t, JumpMode::g_conjugated);
    CHECK(c.left == doctest::Approx(BP.E1 - 0.3));
    CHECK(c.right == doctest::Approx(BP.kappa_plus + 0.05));
    CHECK(c.mesh.size() == 2320);
    int on_cut = 0;
    for (std::size_t j = 0; j < c.mesh.size(); ++j) {
        const double k = c.mesh.nodes()[j].real();
        CHECK(c.mesh.nodes()[j].imag() == 0.0);
        if (c.mesh.panels()[c.mesh.panel_of()[j]].tag == 1) {
            ++on_cut;
            CHECK(k > BP.E1);
            CHECK(k < BP.E2);
        } else {
            CHECK((k < BP.E1 || k > BP.E2));
        }
    }
    CHECK(on_cut > 0);
    // Panels tile [left, right] in order.
    const auto& ps = c.mesh.panels();
    CHECK(ps.front().a.real() == c.left);
    CHECK(ps.back().b.real() == c.right);
    for (std::size_t p = 1; p < ps.size(); ++p) CHECK(ps[p].a == ps[p - 1].b);
    CHECK_THROWS_AS(build_contour(data, 1.0, 0.0, JumpMode::raw), SectorError);
}

TEST_CASE("jump matrices")
{
    SpectralData data(P, 0.5);
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> ks(data.support_left(), data.support_right());
    const double t = 7.0, x = 0.4 * C0 * t;
    JumpFn raw = assemble_jump(data, x, t, JumpMode::raw);
    JumpFn gm = assemble_jump(data, x, t, JumpMode::g_conjugated);
    for (int i = 0; i < 1000; ++i) {
        const double k = ks(gen);
        const bool cut = k > BP.E1 && k < BP.E2;
        const Mat2 a = raw(k, cut), b = gm(k, cut);
        CHECK(std::abs(a.determinant() - 1.0) < 1e-14);
        CHECK(std::abs(b.determinant() - 1.0) < 1e-14);
        if (cut) {
            CHECK(b(0, 0) == 0.0);
            CHECK(std::abs(b(1, 1)) < 1.0);
        }
        if (k > BP.E2) {
            const cplx r = data.r(k);
            const cplx e = std::polar(1.0, 2.0 * (k * x + 2.0 * k * k * t));
            CHECK(std::abs(a(0, 0) - (1.0 - std::norm(r))) < 1e-15);
            CHECK(std::abs(a(0, 1) - std::conj(r) / e) < 1e-14);
            CHECK(std::abs(a(1, 0) + r * e) < 1e-14);
            CHECK(a(1, 1) == 1.0);
        }
    }
    // Outside the support the jump is the identity.
    CHECK(raw(data.support_right() + 0.1, 0) == Mat2::Identity());
    CHECK(gm(data.support_left() - 0.1, 0) == Mat2::Identity());
}

TEST_CASE("raw and g-conjugated solves agree at small t")
{
    SpectralData data(P, 0.5);
    Oracle O(data, light());
    for (double t : {0.5, 1.0}) {
        const double x = 0.3 * C0 * t;
        const OracleResult a = O.solve(x, t, JumpMode::raw);
        const OracleResult b = O.solve(x, t, JumpMode::g_conjugated);
        CHECK(std::abs(a.u - b.u) < 1e-8);
        CHECK(a.probe < 1e-6);
        CHECK(b.probe < 1e-6);
    }
}

TEST_CASE("solution symmetry")
{
    SpectralData data(P, 0.5);
    Mat2 s1;
    s1 << 0.0, 1.0, 1.0, 0.0;
    for (JumpMode mode : {JumpMode::raw, JumpMode::g_conjugated}) {
        const double t = 1.0, x = 0.3 * C0 * t;
        Contour c = build_contour(data, x, t, mode, light().contour);
        RHSolution s = solve_rhp(c.mesh, assemble_jump(data, x, t, mode));
        for (cplx z : {cplx(0.3, 0.4), cplx(-2.0, 0.1), cplx(1.0, -1.0), cplx(-1.0, 0.05)}) {
            const Mat2 m = s.eval(z);
            CHECK((s.eval(std::conj(z)) - s1 * m.conjugate() * s1).norm() < 1e-8 * (1.0 + m.norm()));
        }
    }
}

TEST_CASE("extraction")
{
    Mat2 m1;
    m1 << 0.1, cplx(0.3, -0.2), cplx(0.4, 0.1), -0.1;
    const cplx D(0.6, 0.8);
    // The sign of D(0, inf) is a branch choice; u is blind to it.
    CHECK(extract_u(m1, D) == extract_u(m1, -D));
    CHECK(std::abs(extract_u(m1, D) - (-2.0 * I * D * D * m1(0, 1))) < 1e-16);
}

TEST_CASE("golden value and self-convergence at t = 10")
{
    SpectralData data(P, 0.5);
    const double t = 10.0, x = 0.3 * C0 * t;
    const OracleResult a = Oracle(data).solve(x, t);
    CHECK(std::abs(a.u - cplx(-0.19211478842971, 1.3996899417484)) < 1e-8);
    CHECK(a.probe < 1e-6);
    CHECK(a.residual < 1e-10);
    OracleOptions fine;
    fine.contour.refine = 2.0;
    const OracleResult b = Oracle(data, fine).solve(x, t);
    CHECK(b.nodes > a.nodes);
    CHECK(std::abs(a.u - b.u) < 1e-6);
}

TEST_CASE("under-resolved mesh is reported")
{
    SpectralData data(P, 0.5);
    OracleOptions o;
    o.contour.order = 8;
    o.contour.inner_order = 4;
    o.contour.levels = 4;
    o.contour.panel_phase = 200.0;
    CHECK_THROWS_AS(Oracle(data, o).solve(0.3 * C0 * 10.0, 10.0), ConvergenceError);
}

TEST_CASE("NLS residual")
{
    Lattice z;
    z.nx = z.nt = 5;
    z.hx = z.ht = 0.1;
    z.u.assign(25, 0.0);
    for (cplx r : nls_residual(z)) CHECK(r == 0.0);

    // Background plane wave: the residual is pure truncation error.
    auto background = [](double h) {
        Lattice L;
        L.x0 = 3.0;
        L.t0 = 20.0;
        L.hx = h;
        L.ht = h / 4.0;
        L.nx = L.nt = 9;
        L.u.resize(81);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j)
                L.at(i, j) = P.alpha * std::exp(I * (2.0 * P.beta * (L.x0 + i * L.hx) + P.omega * (L.t0 + j * L.ht)));
        double m = 0.0;
        for (cplx r : nls_residual(L)) m = std::max(m, std::abs(r));
        return m;
    };
    const double r1 = background(0.08), r2 = background(0.04), r3 = background(0.02);
    CHECK(std::log2(r1 / r2) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(std::log2(r2 / r3) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("csv and mesh cache")
{
    OracleResult r;
    r.x = 1.0;
    r.t = 2.0;
    r.u = cplx(0.5, -0.25);
    r.rcond = 0.5;
    std::ostringstream os;
    write_solution_csv(os, {r}, {1e-9});
    CHECK(os.str() == "# schema=1\nx,t,re_u,im_u,residual,condition\n1,2,0.5,-0.25,1.0000000000000001e-09,2\n");

    SpectralData data(P, 0.5);
    Contour c = build_contour(data, 1.0, 5.0, JumpMode::g_conjugated, light().contour);
    const std::string path = "rhpw_test_mesh.bin";
    REQUIRE(save_mesh(path, c.mesh));
    Mesh m;
    REQUIRE(load_mesh(path, m));
    std::remove(path.c_str());
    REQUIRE(m.size() == c.mesh.size());
    for (std::size_t j = 0; j < m.size(); ++j) {
        CHECK(m.nodes()[j] == c.mesh.nodes()[j]);
        CHECK(m.weights()[j] == c.mesh.weights()[j]);
    }
    CHECK(!load_mesh("does_not_exist.bin", m));
    const std::string k1 = mesh_cache_key(data, 0.2, 5.0, JumpMode::raw, {});
    CHECK(k1 == mesh_cache_key(data, 0.2, 4.5, JumpMode::raw, {}));
    CHECK(k1 != mesh_cache_key(data, 0.2, 5.0, JumpMode::g_conjugated, {}));
}
