#include "doctest.h"

#include <cmath>

#include "rhpw/asymptotics.hpp"

using namespace rhpw;

namespace {
const ParameterTriple P = derive_triple(1.0, -8.0);
const BranchPoints BP = branch_points(P);
const double C0 = 0.9 * sector_limit(P);

double maxabs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("global parametrix")
{
    CHECK(std::abs(eval_m_inf(BP, cplx(1.0, 1.0)).determinant() - 1.0) < 1e-13);
    for (cplx k : {cplx(-3.0, 0.5), cplx(0.2, -2.0), cplx(5.0, 0.0), cplx(-1.0, 1e-6)})
        CHECK(std::abs(eval_m_inf(BP, k).determinant() - 1.0) < 1e-12);

    const double a = P.alpha, b = P.beta;
    Mat2 M1, M2;
    M1 << 0.0, I * a / 2.0, -I * a / 2.0, 0.0;
    M2 << a * a / 8.0, -I * a * b / 2.0, I * a * b / 2.0, a * a / 8.0;
    for (cplx k : {cplx(0.0, 2e3), cplx(-2e3, 0.0), cplx(1.4e3, 1.4e3)}) {
        const Mat2 m = eval_m_inf(BP, k);
        CHECK(std::abs(k * m(0, 1) - I * a / 2.0) < 2.0 / std::abs(k));
        CHECK(maxabs((m - Mat2::Identity() - M1 / k) * k * k - M2) < 2e-2);
    }

    // m_+ = m_- (0, 1; -1, 0) on the cut.
    Mat2 J;
    J << 0.0, 1.0, -1.0, 0.0;
    for (double s : {-2.3, -1.0, 0.0, 0.3}) {
        const Mat2 mp = eval_m_inf(BP, s, Side::plus), mm = eval_m_inf(BP, s, Side::minus);
        CHECK(maxabs(mp - mm * J) < 1e-12);
    }
}

TEST_CASE("psi")
{
    const CriticalPoints cp = critical_points(P, 0.0);
    CHECK(g_second_at_k0(cp, BP) == doctest::Approx(11.37731).epsilon(2e-6));
    CHECK(psi_at_k0(cp, BP) == doctest::Approx(4.770176).epsilon(1e-6));
    CHECK(psi_closed_form(P, 0.0) == doctest::Approx(3.373024).epsilon(1e-6));
    // The two conventions differ by exactly sqrt 2.
    for (double f : {0.0, 0.3, 0.7}) {
        const CriticalPoints c = critical_points(P, f * C0);
        CHECK(psi_at_k0(c, BP) / psi_closed_form(P, f * C0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    }

    for (double f : {0.0, 0.3, 0.9}) {
        const CriticalPoints c = critical_points(P, f * C0);
        const double rad = 0.5 * std::min(c.k0 - BP.E2, 0.2);
        for (int i = 0; i <= 6; ++i)
            for (int j = 0; j < 12; ++j) {
                const cplx k = c.k0 + std::polar(rad * i / 6.0, 2.0 * pi * j / 12.0);
                const cplx psi = eval_psi(c, BP, k);
                CHECK(psi.real() > 0.0);
                // i z^2 / 2 = 2 i t (g(k) - g(k0)) with z = sqrt(t) (k - k0) psi.
                for (double t : {1.0, 10.0, 40.0}) {
                    const cplx z = std::sqrt(t) * (k - c.k0) * psi;
                    const cplx rhs = 2.0 * I * t * (eval_g(c, BP, k) - eval_g(c, BP, c.k0));
                    CHECK(std::abs(I * z * z / 2.0 - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
                }
            }
        CHECK(std::abs(eval_psi(c, BP, c.k0) - psi_at_k0(c, BP)) < 1e-10);
    }
}

TEST_CASE("boundary collapse")
{
    SpectralData data(P, 0.5);
    Asymptotics A(data);
    for (double t : {1.0, 10.0, 37.5}) {
        const cplx w = std::exp(I * P.omega * t);
        const auto u = A.u(0.0, t);
        const auto ux = A.ux(0.0, t);
        CHECK(u.sub == 0.0);
        CHECK(ux.sub == 0.0);
        CHECK(std::abs(u.value() - P.alpha * w) < 1e-15);
        CHECK(std::abs(ux.value() - 2.0 * I * P.alpha * P.beta * w) < 1e-14);
        CHECK(A.ub_alt(0.0, t) == 0.0);
    }
    const MhatCoeffs mh = A.mhat(A.local(0.0), 10.0);
    CHECK(mh.m1.norm() == 0.0);
    CHECK(mh.m2.norm() == 0.0);
}

TEST_CASE("leading terms")
{
    SpectralData data(P, 0.5);
    Asymptotics A(data);
    for (double f : {0.1, 0.3, 0.6, 0.9})
        for (double t : {5.0, 25.0}) {
            const double x = f * C0 * t;
            const auto u = A.u(x, t), ux = A.ux(x, t);
            CHECK(std::abs(std::abs(u.leading) - P.alpha) < 1e-10);
            CHECK(std::abs(ux.leading / u.leading - 2.0 * I * P.beta) < 1e-14);
        }
    CHECK_THROWS_AS(A.u(-1.0, 5.0), SectorError);
    CHECK_THROWS_AS(A.u(sector_limit(P) * 5.0, 5.0), SectorError);
    CHECK_THROWS_AS(A.u(0.0, 0.0), SectorError);
}

TEST_CASE("m-hat structure")
{
    SpectralData data(P, 0.5);
    Asymptotics A(data);
    for (double f : {0.2, 0.5, 0.8}) {
        const LocalData loc = A.local(f * C0);
        for (double t : {3.0, 30.0}) {
            const MhatCoeffs mh = A.mhat(loc, t);
            CHECK(maxabs(mh.m2 - loc.cp.k0 * mh.m1) <= 1e-15 * maxabs(mh.m2));
            CHECK(std::abs(mh.m1.trace()) < 1e-15);
            CHECK(std::abs(mh.Y.determinant() - 1.0) < 1e-13);
            // The size is fixed by |beta^X| / (sqrt t psi) up to the bounded Y.
            CHECK(maxabs(mh.m1) < 10.0 * std::abs(loc.betaX) / (std::sqrt(t) * loc.psi));
        }
    }
}

TEST_CASE("assembly against closed form and u_b alternative")
{
    SpectralData data(P, 0.5);
    for (PsiConvention conv : {PsiConvention::definition, PsiConvention::closed_form}) {
        Asymptotics A(data, {}, conv);
        double worst = 0.0;
        for (double f : {0.0, 0.2, 0.4, 0.6, 0.8})
            for (double t : {2.0, 7.0, 15.0, 30.0, 60.0}) {
                const double x = f * C0 * t;
                const LocalData loc = A.local(f * C0);
                const auto u = A.u(loc, x, t), ux = A.ux(loc, x, t);
                CHECK(u.discrepancy < 1e-13);
                CHECK(ux.discrepancy < 1e-13);
                worst = std::max(worst, std::abs(ux.sub - A.ub_alt(loc, x, t)) / (1.0 + std::abs(ux.sub)));
            }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("golden values at t = 25")
{
    SpectralData data(P, 0.5);
    Asymptotics A(data);
    const double t = 25.0, x = 0.3 * C0 * t;
    const auto u = A.u(x, t), ux = A.ux(x, t);
    CHECK(std::abs(u.leading - cplx(-0.55196953514781899, -1.3020482449850701)) < 1e-10);
    CHECK(std::abs(u.sub - cplx(-0.020060766728577518, 0.040024897056784796)) < 1e-8);
    CHECK(std::abs(ux.sub - cplx(0.010850546911603913, -0.057886531481925657)) < 1e-8);

    // Doubling the D-function quadrature leaves the subleading terms in place.
    DOptions fine;
    fine.order = 24;
    fine.levels = 60;
    fine.middle = 32;
    Asymptotics F(data, fine);
    CHECK(std::abs(F.u(x, t).sub - u.sub) < 1e-8);
    CHECK(std::abs(F.ux(x, t).sub - ux.sub) < 1e-8);
}

TEST_CASE("background plane wave solves NLS")
{
    for (double b : {0.5, 1.0, 2.0})
        for (double s : {0.2, 0.5, 0.8}) {
            const double omega = -4.0 * b * b - s * 8.0 * b * b;
            const ParameterTriple p = derive_triple(b, omega);
            CHECK(std::abs(-p.omega - 4.0 * p.beta * p.beta - 2.0 * p.alpha * p.alpha) < 1e-12 * std::abs(omega));
        }
}

TEST_CASE("vanishing reflection near k0 switches off the corrections")
{
    // With the taper zero pulled in to E2 + 0.1, r vanishes beyond it, so any
    // k0 past that point sees q = 0.
    TaperOptions tp;
    tp.delta_right = 0.01;
    tp.ramp = 0.05;
    tp.zero_point = BP.E2 + 0.1;
    tp.cutoff_width = 0.02;
    SpectralData data(P, 0.5, tp);
    Asymptotics A(data);
    for (double f : {0.0, 0.1}) {
        const LocalData loc = A.local(f * C0);
        REQUIRE(loc.cp.k0 > tp.zero_point + tp.cutoff_width);
        CHECK(loc.q == 0.0);
        const double t = 12.0, x = f * C0 * t;
        CHECK(A.u(loc, x, t).sub == 0.0);
        CHECK(A.ux(loc, x, t).sub == 0.0);
        CHECK(std::abs(std::abs(A.u(loc, x, t).value()) - P.alpha) < 1e-10);
    }
}
