#include "doctest.h"

#include <cmath>
#include <sstream>

#include "rhpw/scalar_rhp.hpp"

using namespace rhpw;

namespace {
const ParameterTriple P = derive_triple(1.0, -8.0);
const BranchPoints BP = branch_points(P);
const double C0 = 0.9 * sector_limit(P);
}  // namespace

TEST_CASE("D jump relations")
{
    SpectralData data(P, 0.5);
    for (double f : {0.0, 0.3}) {
        DFunction D(data, f * C0);
        double worst = 0.0, unit = 0.0;
        int count = 0;
        // 80 points on the cut, 60 between E2 and k0, 60 left of E1.
        for (int i = 1; i <= 80; ++i, ++count) {
            double s = BP.E1 + (BP.E2 - BP.E1) * (i - 0.37) / 80.0;
            cplx dp = D.eval(s, Side::plus), dm = D.eval(s, Side::minus);
            cplx r = data.r(spectral_point(BP, s, Side::plus));
            worst = std::max(worst, std::abs(dp * dm - r));
            unit = std::max(unit, std::abs(dp * std::conj(dm) - 1.0));
        }
        for (int i = 1; i <= 60; ++i, ++count) {
            double s = BP.E2 + (D.k0() - BP.E2) * (i - 0.41) / 60.0;
            cplx dp = D.eval(s, Side::plus), dm = D.eval(s, Side::minus);
            double gap = data.one_minus_abs_r2(spectral_point(BP, s));
            worst = std::max(worst, std::abs(dp / dm - gap));
            unit = std::max(unit, std::abs(dp * std::conj(dm) - 1.0));
        }
        for (int i = 1; i <= 60; ++i, ++count) {
            double s = data.support_left() - 0.1 + (BP.E1 - data.support_left() + 0.1) * (i - 0.53) / 60.0;
            cplx dp = D.eval(s, Side::plus), dm = D.eval(s, Side::minus);
            double gap = data.one_minus_abs_r2(spectral_point(BP, s));
            worst = std::max(worst, std::abs(dp / dm - gap));
            unit = std::max(unit, std::abs(dp * std::conj(dm) - 1.0));
        }
        CHECK(count == 200);
        CHECK(worst < 1e-8);
        CHECK(unit < 1e-8);
        // Boundary values agree with nearby off-axis values.
        double s = 0.5 * (BP.E2 + D.k0());
        CHECK(std::abs(D.eval(cplx(s, 1e-9)) - D.eval(s, Side::plus)) < 1e-6);
        CHECK_THROWS_AS(D.eval(cplx(-1.0, 0.0)), BranchAmbiguity);
    }
}

TEST_CASE("D at infinity")
{
    SpectralData data(P, 0.5);
    DOptions fine;
    fine.order = 24;
    fine.levels = 60;
    fine.middle = 32;
    for (double f : {0.0, 0.3, 0.6, 0.9}) {
        DFunction D(data, f * C0), D2(data, f * C0, fine);
        cplx dinf = D.at_infinity();
        CHECK(std::abs(std::abs(dinf) - 1.0) < 1e-10);
        CHECK(std::abs(dinf - D2.at_infinity()) < 1e-9);
        // Far-field limit of D(k).
        CHECK(std::abs(D.eval(cplx(0.0, 1e6)) - dinf) < 1e-5);
    }
    DFunction D(data, 0.0);
    CHECK(std::abs(D.at_infinity() - cplx(0.009461598632944, -0.999955238073840)) < 1e-11);
    // tau does not enter D.
    DFunction Dt(SpectralData(P, 0.0), 0.0);
    CHECK(std::abs(Dt.at_infinity() - D.at_infinity()) < 1e-14);
}

TEST_CASE("D at infinity for synthetic data")
{
    // ln(1-|r|^2) = 0 and arg r = pi on the cut: exponent -(1/(2 pi i)) i pi (-i pi) = i pi / 2.
    DInputs in;
    in.bp = BP;
    in.log_gap = [](const SpectralPoint&) { return 0.0; };
    in.arg_cut = [](const SpectralPoint&) { return pi; };
    in.support_left = BP.E1;
    DFunction D(in, 0.3 * C0);
    CHECK(std::abs(D.at_infinity() - I) < 1e-12);
    CHECK(D.nu() == 0.0);
}

TEST_CASE("conjugation symmetry")
{
    SpectralData data(P, 0.5);
    DFunction D(data, 0.0);
    cplx k(5.0, 5.0);
    CHECK(std::abs(D.eval(k) * std::conj(D.eval(std::conj(k))) - 1.0) < 1e-10);
    for (int i = 0; i < 50; ++i) {
        cplx z = std::polar(0.2 + 0.1 * i, 0.3 + 0.11 * i);
        if (std::abs(z.imag()) < 1e-3) continue;
        CHECK(std::abs(D.eval(z) * std::conj(D.eval(std::conj(z))) - 1.0) < 1e-10);
    }
}

TEST_CASE("fourth-root law at E2")
{
    SpectralData data(P, 0.5);
    DFunction D(data, 0.3 * C0);
    auto e2 = extract_branch_coeffs(data, false);
    const double limit = std::exp(0.5 * std::log(-2.0 * e2.q[0] * e2.q[1]));
    CHECK(limit == doctest::Approx(std::sqrt(2.0 * std::pow(2.0, 0.25))).epsilon(1e-8));
    double lo = 1e300, hi = 0.0;
    for (double d : {1e-3, 1e-4, 1e-5, 1e-6}) {
        SpectralPoint p = near_E2(BP, cplx(0.0, d));
        double ratio = std::abs(D.eval(p)) / std::pow(d, 0.25);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        CHECK(std::abs(ratio / limit - 1.0) < 0.02);
    }
    CHECK((hi - lo) / limit < 0.02);
}

TEST_CASE("nu and D_b")
{
    SpectralData data(P, 0.5);
    DFunction D0(data, 0.0);
    CHECK(D0.nu() == 0.0);
    CHECK(D0.k0() == doctest::Approx(BP.kappa_plus).epsilon(1e-15));
    auto b0 = D0.eval_Db();
    CHECK(std::abs(b0.value - D0.eval(D0.k0() + 1e-12)) < 1e-9);

    // ln(1-|r|^2) = -ln 2 everywhere on the support.
    DInputs half;
    half.bp = BP;
    half.log_gap = [](const SpectralPoint&) { return -std::log(2.0); };
    half.arg_cut = [](const SpectralPoint&) { return -pi / 2; };
    half.support_left = BP.E1 - 1.0;
    CHECK(DFunction(half, 0.3 * C0).nu() == doctest::Approx(0.110318).epsilon(1e-6));

    DOptions fine;
    fine.order = 24;
    fine.levels = 60;
    fine.middle = 32;
    for (double f : {0.3, 0.6, 0.9}) {
        DFunction D(data, f * C0), D2(data, f * C0, fine);
        auto b = D.eval_Db();
        CHECK(b.nu > 0.0);
        CHECK(std::abs(b.value - D2.eval_Db().value) < 2e-9);
        CHECK(std::abs(b.value) > 0.5);
        CHECK(std::abs(b.value) < 2.0);
        // Oblique approaches converge to the same limit.
        for (double ang : {pi / 4, 3 * pi / 4, -pi / 4, -3 * pi / 4}) {
            double e4 = std::abs(D.approach_k0(1e-4, ang) - b.value);
            double e6 = std::abs(D.approach_k0(1e-6, ang) - b.value);
            CHECK(e6 < 1e-4);
            CHECK(e6 < e4);
        }
    }
    DFunction D(data, 0.3 * C0);
    CHECK(D.nu() == doctest::Approx(0.006994).epsilon(1e-3));
    CHECK(std::abs(D.eval_Db().value - cplx(0.008217235205, -0.999966237953)) < 1e-9);
}

TEST_CASE("damping factor equals the ratio of D at infinity")
{
    SpectralData data(P, 0.5);
    cplx d0 = DFunction(data, 0.0).at_infinity();
    CHECK(std::abs(damping_factor(data, 0.0) - 1.0) < 1e-15);
    for (double f : {0.3, 0.6, 0.9}) {
        cplx df = DFunction(data, f * C0).at_infinity();
        cplx dmp = damping_factor(data, f * C0);
        CHECK(std::abs(std::abs(dmp) - 1.0) < 1e-12);
        CHECK(std::abs(dmp - d0 * d0 / (df * df)) < 1e-9);
    }
}

TEST_CASE("bounded on an annulus across the sector")
{
    SpectralData data(P, 0.5);
    const cplx centre = 0.5 * (BP.E1 + BP.E2);
    double first = 0.0;
    for (int j = 0; j <= 5; ++j) {
        DFunction D(data, j / 5.0 * 0.999 * C0);
        double mx = 0.0;
        for (double rad : {2.0, 3.0})
            for (int i = 0; i < 64; ++i) {
                cplx k = centre + std::polar(rad, 2 * pi * (i + 0.5) / 64);
                cplx v = D.eval(k);
                mx = std::max({mx, std::abs(v), 1.0 / std::abs(v)});
            }
        if (j == 0) first = mx;
        CHECK(mx < 3.0);
        CHECK(mx / first < 1.5);
    }
}

TEST_CASE("D golden CSV")
{
    SpectralData data(P, 0.5);
    DFunction D(data, 0.0);
    std::vector<GoldenRow> rows;
    for (cplx k : {cplx(0.0, 1.0), cplx(2.0, 0.5), cplx(-1.0, -0.5)}) rows.push_back({k, D.eval(k)});
    std::ostringstream os;
    write_D_csv(os, rows);
    CHECK(os.str().rfind("# schema=1\nre_k,im_k,re_D,im_D\n", 0) == 0);
}
