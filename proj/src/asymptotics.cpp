#include "rhpw/asymptotics.hpp"

#include <cmath>

#include "rhpw/model_cross.hpp"

namespace rhpw {

Mat2 eval_m_inf(const BranchPoints& bp, cplx k, Side side)
{
    const cplx d = eval_Delta(bp, k, side);
    const cplx a = 0.5 * (d + 1.0 / d), b = 0.5 * (d - 1.0 / d);
    Mat2 m;
    m << a, -I * b, I * b, a;
    return m;
}

cplx eval_psi(const CriticalPoints& cp, const BranchPoints& bp, cplx k)
{
    const cplx d = k - cp.k0;
    cplx psi2;
    if (std::abs(d) < 1e-5) {
        psi2 = 2.0 * g_second_at_k0(cp, bp) + (2.0 / 3.0) * g_third_at_k0(cp, bp) * d;
    } else {
        const cplx g0 = eval_g(cp, bp, cp.k0);
        psi2 = 4.0 * (eval_g(cp, bp, k) - g0) / (d * d);
    }
    return std::sqrt(psi2);
}

double psi_at_k0(const CriticalPoints& cp, const BranchPoints& bp) { return std::sqrt(2.0 * g_second_at_k0(cp, bp)); }

double psi_closed_form(const ParameterTriple& p, double zeta)
{
    const BranchPoints bp = branch_points(p);
    const CriticalPoints cp = critical_points(p, zeta);
    const double b8 = (4.0 * p.beta - zeta) / 8.0;
    const double X0 = eval_X(bp, cp.k0).real();
    return 2.0 * std::sqrt(2.0) * std::pow(p.alpha * p.alpha / 2.0 + b8 * b8, 0.25) / std::sqrt(X0);
}

Asymptotics::Asymptotics(const SpectralData& data, const DOptions& dopt, PsiConvention conv)
    : data_(data), dopt_(dopt), conv_(conv)
{
    d0inf_ = DFunction(data_, 0.0, dopt_).at_infinity();
}

void Asymptotics::check_sector(double x, double t) const
{
    if (!(t > 0.0) || !(x >= 0.0) || !(x / t < sector_limit(data_.triple())))
        throw SectorError("asymptotics: (x, t) outside the plane-wave sector 0 <= x/t < 4 beta - 2 alpha");
}

LocalData Asymptotics::local(double zeta) const
{
    const ParameterTriple& p = data_.triple();
    const BranchPoints& bp = data_.branch();
    LocalData loc;
    loc.zeta = zeta;
    loc.cp = critical_points(p, zeta);
    const SpectralPoint pk0 = near_E2(bp, loc.cp.k0 - bp.E2);
    loc.X0 = eval_X(pk0).real();
    loc.Delta0 = eval_Delta(pk0).real();
    loc.g0 = eval_g(loc.cp, bp, pk0).real();
    loc.psi = conv_ == PsiConvention::definition ? psi_at_k0(loc.cp, bp) : psi_closed_form(p, zeta);
    loc.q = data_.r(pk0);
    loc.nu = eval_nu(loc.q);
    loc.betaX = eval_betaX(loc.q);
    loc.Db = DFunction(data_, zeta, dopt_).eval_Db().value;
    loc.damping = damping_factor(data_, zeta);
    return loc;
}

MhatCoeffs Asymptotics::mhat(const LocalData& loc, double t) const
{
    const BranchPoints& bp = data_.branch();
    MhatCoeffs out;
    out.m1X << 0.0, -loc.betaX, -std::conj(loc.betaX), 0.0;
    // D_0 = t^{-i nu/2} psi^{-i nu} D_b.
    const cplx D0 = std::exp(-I * loc.nu * (0.5 * std::log(t) + std::log(loc.psi))) * loc.Db;
    const cplx e1 = std::exp(-I * t * loc.g0) * D0;
    Mat2 E = Mat2::Zero();
    E(0, 0) = e1;
    E(1, 1) = 1.0 / e1;
    out.Y = eval_m_inf(bp, loc.cp.k0) * E;
    out.m1 = out.Y * out.m1X * out.Y.inverse() / (std::sqrt(t) * loc.psi);
    out.m2 = loc.cp.k0 * out.m1;
    return out;
}

AsymptoticExpansion Asymptotics::u(double x, double t) const
{
    check_sector(x, t);
    return u(local(x / t), x, t);
}

AsymptoticExpansion Asymptotics::ux(double x, double t) const
{
    check_sector(x, t);
    return ux(local(x / t), x, t);
}

cplx Asymptotics::ub_alt(double x, double t) const
{
    check_sector(x, t);
    return ub_alt(local(x / t), x, t);
}

namespace {

// Unimodular factors of the closed forms: t^{-i nu} psi^{-2 i nu} D_b^2 e^{-2 i t g0}.
cplx closed_phase(const LocalData& loc, double t)
{
    return std::exp(-I * loc.nu * (std::log(t) + 2.0 * std::log(loc.psi)) - 2.0 * I * t * loc.g0) * loc.Db * loc.Db;
}

}  // namespace

AsymptoticExpansion Asymptotics::u(const LocalData& loc, double x, double t) const
{
    const ParameterTriple& p = data_.triple();
    AsymptoticExpansion e;
    e.t = t;
    const cplx wave = std::exp(I * (2.0 * p.beta * x + p.omega * t)) * loc.damping;
    e.leading = wave * p.alpha;
    if (loc.betaX == 0.0) return e;

    const MhatCoeffs mh = mhat(loc, t);
    e.sub = -2.0 * I * wave * mh.m1(0, 1) * std::sqrt(t);

    const double d2 = loc.Delta0 * loc.Delta0;
    const cplx P = closed_phase(loc, t);
    e.sub_closed = wave * (I * loc.betaX * (d2 + 1.0) * (d2 + 1.0) * P
                           + I * std::conj(loc.betaX) * (d2 - 1.0) * (d2 - 1.0) / P)
                   / (2.0 * d2 * loc.psi);
    e.discrepancy = std::abs(e.sub - e.sub_closed);
    return e;
}

AsymptoticExpansion Asymptotics::ux(const LocalData& loc, double x, double t) const
{
    const ParameterTriple& p = data_.triple();
    const BranchPoints& bp = data_.branch();
    AsymptoticExpansion e;
    e.t = t;
    const cplx wave = std::exp(I * (2.0 * p.beta * x + p.omega * t)) * loc.damping;
    e.leading = 2.0 * I * p.alpha * p.beta * wave;
    if (loc.betaX == 0.0) return e;

    const MhatCoeffs mh = mhat(loc, t);
    e.sub = -2.0 * wave * (I * p.alpha * (mh.m1(0, 0) - mh.m1(1, 1)) + 2.0 * mh.m2(0, 1)) * std::sqrt(t);

    const double d2 = loc.Delta0 * loc.Delta0;
    const double k0 = loc.cp.k0;
    const double edge = -2.0 * p.alpha * p.alpha / (k0 - bp.E1);
    const cplx P = closed_phase(loc, t);
    e.sub_closed = wave * (loc.betaX * (edge + k0 * (d2 + 1.0) * (d2 + 1.0)) * P
                           + std::conj(loc.betaX) * (edge + k0 * (d2 - 1.0) * (d2 - 1.0)) / P)
                   / (d2 * loc.psi);
    e.discrepancy = std::abs(e.sub - e.sub_closed);
    return e;
}

cplx Asymptotics::ub_alt(const LocalData& loc, double x, double t) const
{
    const ParameterTriple& p = data_.triple();
    if (loc.betaX == 0.0) return 0.0;
    const cplx wave = std::exp(I * (2.0 * p.beta * x + p.omega * t)) * loc.damping;
    const MhatCoeffs mh = mhat(loc, t);
    const Mat2 Yi = mh.Y.inverse();
    const Mat2 s3 = sigma3();
    const Mat2 inner = 2.0 * p.beta * mh.Y * mh.m1X * Yi - loc.X0 * mh.Y * s3 * mh.m1X * Yi
                       + loc.X0 * mh.Y * mh.m1X * s3 * Yi;
    return 2.0 * wave * inner(0, 1) / loc.psi;
}

}  // namespace rhpw
