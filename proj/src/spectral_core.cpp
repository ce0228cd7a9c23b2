#include "rhpw/spectral_core.hpp"

#include <cmath>
#include <sstream>

namespace rhpw {

namespace {

// Principal square / fourth root with an explicit choice of boundary value
// when d lies on the negative real axis (the cut of the principal branch).
cplx sided_root(cplx d, double power, Side side)
{
    if (d.imag() == 0.0 && d.real() < 0.0 && side != Side::none) {
        double mag = std::pow(-d.real(), power);
        double arg = (side == Side::plus ? pi : -pi) * power;
        return std::polar(mag, arg);
    }
    if (d == 0.0) return 0.0;
    if (power == 0.5) return std::sqrt(d);
    return std::pow(d, power);
}

CriticalPoints critical_from(double alpha, double beta, double zeta)
{
    CriticalPoints cp;
    cp.zeta = zeta;
    double a = (4.0 * beta + zeta) / 8.0;
    double b = (4.0 * beta - zeta) / 8.0;
    double root = std::sqrt(alpha * alpha / 2.0 + b * b);
    cp.k0 = -a + root;
    cp.k1 = -a - root;
    cp.g_inf = beta * zeta - alpha * alpha - 2.0 * beta * beta;
    return cp;
}

}  // namespace

ParameterTriple derive_triple(double beta, double omega)
{
    if (!(beta > 0.0) || !(omega > -12.0 * beta * beta && omega < -4.0 * beta * beta)) {
        std::ostringstream os;
        os << "inadmissible parameters (beta=" << beta << ", omega=" << omega
           << "): need beta > 0 and -12β² < ω < -4β²";
        throw InadmissibleParameters(os.str());
    }
    ParameterTriple p;
    p.beta = beta;
    p.omega = omega;
    p.alpha = std::sqrt(std::abs(omega) / 2.0 - 2.0 * beta * beta);
    p.c = 2.0 * I * p.alpha * beta;
    return p;
}

ParameterTriple triple_from_alpha(double alpha, double omega)
{
    double b2 = (-omega / 2.0 - alpha * alpha) / 2.0;
    if (!(alpha > 0.0) || !(b2 > 0.0)) {
        std::ostringstream os;
        os << "inadmissible parameters (alpha=" << alpha << ", omega=" << omega
           << "): need -12β² < ω < -4β² with β² = (-ω/2 - α²)/2 > 0";
        throw InadmissibleParameters(os.str());
    }
    return derive_triple(std::sqrt(b2), omega);
}

BranchPoints branch_points(const ParameterTriple& p)
{
    BranchPoints bp;
    bp.alpha = p.alpha;
    bp.beta = p.beta;
    bp.E1 = -p.beta - p.alpha;
    bp.E2 = -p.beta + p.alpha;
    bp.kappa_plus = -p.beta / 2.0 + std::sqrt(p.alpha * p.alpha / 2.0 + p.beta * p.beta / 4.0);
    return bp;
}

double sector_limit(const ParameterTriple& p) { return 4.0 * p.beta - 2.0 * p.alpha; }

CriticalPoints critical_points(const ParameterTriple& p, double zeta)
{
    if (!(zeta >= 0.0) || !(zeta < sector_limit(p))) {
        std::ostringstream os;
        os << "zeta=" << zeta << " outside the plane-wave sector [0, " << sector_limit(p) << ")";
        throw SectorError(os.str());
    }
    return critical_from(p.alpha, p.beta, zeta);
}

SpectralPoint spectral_point(const BranchPoints& bp, cplx k, Side side)
{
    return {k, k - bp.E1, k - bp.E2, side};
}

SpectralPoint near_E1(const BranchPoints& bp, cplx offset, Side side)
{
    return {bp.E1 + offset, offset, offset + (bp.E1 - bp.E2), side};
}

SpectralPoint near_E2(const BranchPoints& bp, cplx offset, Side side)
{
    return {bp.E2 + offset, offset + (bp.E2 - bp.E1), offset, side};
}

bool on_open_cut(const SpectralPoint& p)
{
    return p.dE2.imag() == 0.0 && p.dE1.imag() == 0.0 && p.dE1.real() > 0.0 && p.dE2.real() < 0.0;
}

static void require_side(const SpectralPoint& p)
{
    if (p.side == Side::none && on_open_cut(p))
        throw BranchAmbiguity("point on the open cut (E1,E2) needs a side flag");
}

cplx eval_X(const SpectralPoint& p)
{
    require_side(p);
    return sided_root(p.dE1, 0.5, p.side) * sided_root(p.dE2, 0.5, p.side);
}

cplx eval_X(const BranchPoints& bp, cplx k, Side side) { return eval_X(spectral_point(bp, k, side)); }

cplx eval_Delta(const SpectralPoint& p)
{
    require_side(p);
    return sided_root(p.dE2, 0.25, p.side) / sided_root(p.dE1, 0.25, p.side);
}

cplx eval_Delta(const BranchPoints& bp, cplx k, Side side)
{
    return eval_Delta(spectral_point(bp, k, side));
}

cplx eval_Delta2(const SpectralPoint& p)
{
    require_side(p);
    return sided_root(p.dE2, 0.5, p.side) / sided_root(p.dE1, 0.5, p.side);
}

cplx eval_g(const CriticalPoints& cp, const BranchPoints& bp, const SpectralPoint& p)
{
    return (2.0 * p.k - 2.0 * bp.beta + cp.zeta) * eval_X(p);
}

cplx eval_g(const CriticalPoints& cp, const BranchPoints& bp, cplx k, Side side)
{
    return eval_g(cp, bp, spectral_point(bp, k, side));
}

cplx eval_dg(const CriticalPoints& cp, const BranchPoints& bp, cplx k, Side side)
{
    return 4.0 * (k - cp.k1) * (k - cp.k0) / eval_X(bp, k, side);
}

double g_second_at_k0(const CriticalPoints& cp, const BranchPoints& bp)
{
    double X0 = eval_X(bp, cp.k0).real();
    return 4.0 * (cp.k0 - cp.k1) / X0;
}

double g_third_at_k0(const CriticalPoints& cp, const BranchPoints& bp)
{
    double X0 = eval_X(bp, cp.k0).real();
    double d = cp.k0 - cp.k1;
    return 4.0 * (2.0 / X0 - 2.0 * d * (cp.k0 + bp.beta) / (X0 * X0 * X0));
}

std::vector<cplx> trace_level_curve(const BranchPoints& bp, double zeta, int half_plane, double R,
                                    const TraceOptions& opt)
{
    const CriticalPoints cp = critical_from(bp.alpha, bp.beta, zeta);
    const double sgn = half_plane >= 0 ? 1.0 : -1.0;
    auto img = [&](cplx k) { return eval_g(cp, bp, k).imag(); };
    auto dg = [&](cplx k) { return eval_dg(cp, bp, k); };

    // Newton correction transverse to the level set.
    auto correct = [&](cplx k, int& iters) {
        for (iters = 0; iters < 20; ++iters) {
            double im = img(k);
            double scale = std::max(1.0, std::abs(eval_g(cp, bp, k)));
            if (std::abs(im) < opt.tol * scale * 1e-2) break;
            cplx d = dg(k);
            double ad = std::abs(d);
            k -= (im / ad) * I * std::conj(d) / ad;
        }
        return k;
    };

    std::vector<cplx> pts{cplx(cp.k0, 0.0)};
    cplx dir(0.0, sgn);
    cplx k = pts.front();
    double h = opt.first_step;
    if (R <= 0.0) throw std::invalid_argument("trace radius must be positive");

    while (sgn * k.imag() < R) {
        if (h < opt.min_step) throw ConvergenceError("level-curve continuation: step collapse");
        double hs = h;
        cplx pred = k + hs * dir;
        bool last = sgn * pred.imag() >= R;
        int iters = 0;
        cplx next = correct(pred, iters);
        if (last) {
            // Land on Im k = +-R exactly: Newton in Re k.
            cplx z(next.real(), sgn * R);
            for (int it = 0; it < 30; ++it) {
                double im = img(z);
                double dim = dg(z).imag();
                double step = im / dim;
                z -= step;
                if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
            }
            next = z;
        }
        cplx nd = std::conj(dg(next));
        nd /= std::abs(nd);
        if ((nd * std::conj(dir)).real() < 0.0) nd = -nd;
        double turn = std::abs(std::arg(nd * std::conj(dir)));
        double shift = std::abs(next - pred);
        if (!last && (iters >= 8 || shift > 0.2 * hs || turn > opt.max_turn)) {
            h *= 0.5;
            continue;
        }
        if (std::abs(img(next)) > opt.tol * std::max(1.0, std::abs(eval_g(cp, bp, next)))) {
            h *= 0.5;
            if (last && h < opt.min_step) throw ConvergenceError("level-curve continuation: endpoint");
            continue;
        }
        pts.push_back(next);
        k = next;
        dir = nd;
        if (last) break;
        if (turn < 0.3 * opt.max_turn && iters <= 3) h = std::min(1.5 * h, opt.max_step);
    }
    return pts;
}

}  // namespace rhpw
