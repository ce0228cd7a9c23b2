#pragma once

#include <string>

#include "rhpw/scalar_rhp.hpp"

namespace rhpw {

// m_inf = (1/2) [[D + 1/D, -i (D - 1/D)], [i (D - 1/D), D + 1/D]], D = Delta(k).
Mat2 eval_m_inf(const BranchPoints& bp, cplx k, Side side = Side::none);

// psi(k) = 2 sqrt((g(k) - g(k0)) / (k - k0)^2) with Re psi > 0, valid near k0.
cplx eval_psi(const CriticalPoints& cp, const BranchPoints& bp, cplx k);
// psi(k0) = 2 sqrt(g''(k0)/2).
double psi_at_k0(const CriticalPoints& cp, const BranchPoints& bp);
// 2 sqrt2 (alpha^2/2 + ((4 beta - zeta)/8)^2)^{1/4} / sqrt(X(k0)), which equals sqrt(g''(k0)).
double psi_closed_form(const ParameterTriple& p, double zeta);

// Which psi(k0) enters the subleading terms.
enum class PsiConvention { definition, closed_form };

// Everything the subleading terms need at a given zeta.
struct LocalData {
    double zeta = 0.0;
    CriticalPoints cp;
    double X0 = 0.0;      // X(k0)
    double Delta0 = 0.0;  // Delta(k0)
    double g0 = 0.0;      // g(k0)
    double psi = 0.0;
    cplx q;               // r(k0)
    double nu = 0.0;
    cplx betaX;
    cplx Db;              // D_b(zeta, k0)
    cplx damping;         // D(0,inf)^2 / D(zeta,inf)^2
};

struct MhatCoeffs {
    Mat2 m1;
    Mat2 m2;
    Mat2 Y;    // Y(zeta, t, k0)
    Mat2 m1X;  // -[[0, beta^X], [conj beta^X, 0]]
};

struct AsymptoticExpansion {
    cplx leading;       // plane wave with damping factor
    cplx sub;           // coefficient of t^{-1/2}, assembled from the m-hat moments
    cplx sub_closed;    // the same coefficient from the explicit closed form
    double discrepancy = 0.0;  // |sub - sub_closed|
    std::string order_tag = "O(ln t / t)";
    double t = 1.0;
    cplx value() const { return leading + sub / std::sqrt(t); }
};

class Asymptotics {
public:
    Asymptotics(const SpectralData& data, const DOptions& dopt = {},
                PsiConvention conv = PsiConvention::definition);

    const SpectralData& data() const { return data_; }
    PsiConvention convention() const { return conv_; }
    cplx D0_infinity() const { return d0inf_; }

    LocalData local(double zeta) const;
    MhatCoeffs mhat(const LocalData& loc, double t) const;

    AsymptoticExpansion u(double x, double t) const;
    AsymptoticExpansion ux(double x, double t) const;
    // u_b from differentiating the assembled u in x.
    cplx ub_alt(double x, double t) const;

    // Pieces shared by the routines above for a given local data set.
    AsymptoticExpansion u(const LocalData& loc, double x, double t) const;
    AsymptoticExpansion ux(const LocalData& loc, double x, double t) const;
    cplx ub_alt(const LocalData& loc, double x, double t) const;

private:
    void check_sector(double x, double t) const;

    SpectralData data_;
    DOptions dopt_;
    PsiConvention conv_;
    cplx d0inf_;
};

}  // namespace rhpw
