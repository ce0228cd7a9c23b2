#pragma once

#include <vector>

#include "rhpw/common.hpp"

namespace rhpw {

// Admissible plane-wave boundary data: u(0,t) = alpha e^{i omega t},
// u_x(0,t) = c e^{i omega t}.
struct ParameterTriple {
    double alpha = 0.0;
    double omega = 0.0;
    double beta = 0.0;
    cplx c{};
};

// Requires -12 beta^2 < omega < -4 beta^2.
ParameterTriple derive_triple(double beta, double omega);
// Same family parametrized by the amplitude; beta is recovered from
// omega = -2(alpha^2 + 2 beta^2).
ParameterTriple triple_from_alpha(double alpha, double omega);

struct BranchPoints {
    double E1 = 0.0;
    double E2 = 0.0;
    double kappa_plus = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

BranchPoints branch_points(const ParameterTriple& p);

struct CriticalPoints {
    double zeta = 0.0;
    double k0 = 0.0;
    double k1 = 0.0;
    double g_inf = 0.0;
};

// Upper end 4 beta - 2 alpha of the plane-wave sector in zeta = x/t.
double sector_limit(const ParameterTriple& p);
CriticalPoints critical_points(const ParameterTriple& p, double zeta);

// A spectral variable together with its offsets from E1 and E2. The offsets
// are carried separately so that points within rounding distance of a branch
// point keep full relative accuracy.
struct SpectralPoint {
    cplx k{};
    cplx dE1{};
    cplx dE2{};
    Side side = Side::none;
};

SpectralPoint spectral_point(const BranchPoints& bp, cplx k, Side side = Side::none);
// k = E1 + offset / k = E2 + offset.
SpectralPoint near_E1(const BranchPoints& bp, cplx offset, Side side = Side::none);
SpectralPoint near_E2(const BranchPoints& bp, cplx offset, Side side = Side::none);

bool on_open_cut(const SpectralPoint& p);

// X(k) = sqrt((k+beta)^2 - alpha^2), cut on [E1,E2], X ~ k + beta.
cplx eval_X(const SpectralPoint& p);
cplx eval_X(const BranchPoints& bp, cplx k, Side side = Side::none);

// Delta(k) = ((k-E2)/(k-E1))^{1/4}, Delta(inf) = 1.
cplx eval_Delta(const SpectralPoint& p);
cplx eval_Delta(const BranchPoints& bp, cplx k, Side side = Side::none);
// Delta(k)^2, computed without an intermediate fourth root.
cplx eval_Delta2(const SpectralPoint& p);

// g(k) = (2k - 2 beta + zeta) X(k); zeta = 0 gives Omega.
cplx eval_g(const CriticalPoints& cp, const BranchPoints& bp, const SpectralPoint& p);
cplx eval_g(const CriticalPoints& cp, const BranchPoints& bp, cplx k, Side side = Side::none);
// dg/dk = 4 (k-k1)(k-k0) / X(k).
cplx eval_dg(const CriticalPoints& cp, const BranchPoints& bp, cplx k, Side side = Side::none);
// g''(k0) = 4 (k0-k1) / X(k0) and g'''(k0).
double g_second_at_k0(const CriticalPoints& cp, const BranchPoints& bp);
double g_third_at_k0(const CriticalPoints& cp, const BranchPoints& bp);

// Raw phase theta(k) = k x + 2 k^2 t.
struct Phase {
    double x = 0.0;
    double t = 0.0;
    cplx operator()(cplx k) const { return k * x + 2.0 * k * k * t; }
};

struct TraceOptions {
    double tol = 1e-10;
    double first_step = 1e-3;
    double max_step = 0.5;
    double min_step = 1e-12;
    double max_turn = 0.05;  // radians between consecutive tangents
};

// Polyline on {Im g(zeta, .) = 0} leaving k0 into the upper (half_plane > 0)
// or lower half plane, ending on |Im k| = R. First vertex is k0.
std::vector<cplx> trace_level_curve(const BranchPoints& bp, double zeta, int half_plane, double R,
                                    const TraceOptions& opt = {});

}  // namespace rhpw
