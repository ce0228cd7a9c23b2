#include "rhpw/scalar_rhp.hpp"

#include <cmath>
#include <iomanip>
#include <memory>
#include <ostream>

#include "rhpw/quadrature.hpp"

namespace rhpw {

DInputs d_inputs(const SpectralData& data)
{
    DInputs in;
    in.bp = data.branch();
    // The data object is captured by value so the inputs stay self-contained.
    auto shared = std::make_shared<SpectralData>(data);
    in.log_gap = [shared](const SpectralPoint& p) { return std::log(shared->one_minus_abs_r2(p)); };
    in.arg_cut = [shared](const SpectralPoint& p) { return shared->arg_on_cut(p); };
    in.support_left = data.support_left();
    return in;
}

DFunction::DFunction(const SpectralData& data, double zeta, const DOptions& opt)
    : DFunction(d_inputs(data), zeta, opt)
{
}

DFunction::DFunction(const DInputs& in, double zeta, const DOptions& opt) : in_(in), zeta_(zeta)
{
    const BranchPoints& bp = in_.bp;
    const double alpha = bp.alpha, beta = bp.beta;
    if (!(zeta >= 0.0) || !(zeta < 4.0 * beta - 2.0 * alpha))
        throw SectorError("D-function: zeta outside the plane-wave sector");
    const double b8 = (4.0 * beta - zeta) / 8.0;
    k0_ = -(4.0 * beta + zeta) / 8.0 + std::sqrt(alpha * alpha / 2.0 + b8 * b8);

    const double L = bp.E2 - bp.E1;
    double left = in_.support_left;
    if (!std::isfinite(left)) left = bp.E1 - (opt.R_left > 0.0 ? opt.R_left : 1e3 * L);
    if (left < bp.E1) add_piece(bp.E1, 1, -1.0, std::sqrt(bp.E1 - left), false, false, opt);
    add_piece(bp.E1, 1, +1.0, std::sqrt(0.5 * L), true, false, opt);
    add_piece(bp.E2, 2, -1.0, std::sqrt(0.5 * L), true, false, opt);
    add_piece(bp.E2, 2, +1.0, std::sqrt(k0_ - bp.E2), false, true, opt);

    SpectralPoint pk0 = near_E2(bp, k0_ - bp.E2);
    nu_ = -in_.log_gap(pk0) / (2.0 * pi);
}

void DFunction::add_piece(double anchor_value, int anchor, double sign, double ulen, bool cut, bool grade_far,
                          const DOptions& opt)
{
    Piece pc;
    pc.anchor = anchor;
    pc.cut = cut;
    double far = anchor_value + sign * ulen * ulen;
    pc.a = std::min(anchor_value, far);
    pc.b = std::max(anchor_value, far);
    pc.singular_a = sign > 0;
    pc.singular_b = sign < 0;
    const GaussRule& g = gauss_legendre(opt.order);
    auto parts = graded_partition(ulen, true, grade_far, opt.levels, opt.middle);
    const Side side = cut ? Side::plus : Side::none;
    for (const auto& iv : parts) {
        double mid = 0.5 * (iv.a + iv.b), half = 0.5 * (iv.b - iv.a);
        for (int j = 0; j < opt.order; ++j) {
            double u = mid + half * g.x[j];
            double off = sign * u * u;
            SpectralPoint p = anchor == 1 ? near_E1(in_.bp, off, side) : near_E2(in_.bp, off, side);
            pc.s.push_back(p);
            pc.w.push_back(2.0 * u * half * g.w[j]);
        }
    }
    for (const auto& p : pc.s) pc.F.push_back(density(pc, p));
    pieces_.push_back(std::move(pc));
}

std::size_t DFunction::node_count() const
{
    std::size_t n = 0;
    for (const auto& pc : pieces_) n += pc.s.size();
    return n;
}

cplx DFunction::density(const Piece& pc, const SpectralPoint& p) const
{
    if (pc.cut) {
        SpectralPoint q = p;
        q.side = Side::plus;
        return I * in_.arg_cut(q) / eval_X(q);
    }
    return in_.log_gap(p) / eval_X(p);
}

cplx DFunction::offset(const Piece& pc, const SpectralPoint& p) const { return pc.anchor == 1 ? p.dE1 : p.dE2; }

cplx DFunction::cauchy(const Piece& pc, const SpectralPoint& k) const
{
    const double anchor = pc.anchor == 1 ? in_.bp.E1 : in_.bp.E2;
    const double a_off = pc.a - anchor, b_off = pc.b - anchor;
    const cplx koff = offset(pc, k);
    const double x0 = koff.real();
    const bool inside = x0 > a_off && x0 < b_off;
    const bool on_piece = inside && koff.imag() == 0.0;
    if (on_piece && k.side == Side::none) throw BranchAmbiguity("D-function: point on the integration contour");
    const double dist = std::min(x0 - a_off, b_off - x0);
    const bool subtract = inside && std::abs(koff.imag()) < dist;

    cplx sum = 0.0;
    if (!subtract) {
        for (std::size_t j = 0; j < pc.s.size(); ++j) sum += pc.w[j] * pc.F[j] / (offset(pc, pc.s[j]) - koff);
        return sum;
    }
    const Side fs = pc.cut ? Side::plus : Side::none;
    SpectralPoint foot = pc.anchor == 1 ? near_E1(in_.bp, x0, fs) : near_E2(in_.bp, x0, fs);
    const cplx F0 = density(pc, foot);
    for (std::size_t j = 0; j < pc.s.size(); ++j) {
        cplx d = offset(pc, pc.s[j]) - koff;
        if (d == 0.0) continue;
        sum += pc.w[j] * (pc.F[j] - F0) / d;
    }
    if (on_piece) {
        double pv = std::log((b_off - x0) / (x0 - a_off));
        sum += F0 * cplx(pv, k.side == Side::plus ? pi : -pi);
    } else {
        sum += F0 * std::log((b_off - koff) / (a_off - koff));
    }
    return sum;
}

cplx DFunction::log_eval(const SpectralPoint& p) const
{
    if (p.k.imag() == 0.0 && p.k.real() < k0_ && p.side == Side::none && p.k.real() > in_.support_left)
        throw BranchAmbiguity("D-function: real point left of k0 needs a side flag");
    cplx J = 0.0;
    for (const auto& pc : pieces_) J += cauchy(pc, p);
    return eval_X(p) / (2.0 * pi * I) * J;
}

cplx DFunction::eval(const SpectralPoint& p) const { return std::exp(log_eval(p)); }

cplx DFunction::eval(cplx k, Side side) const { return eval(spectral_point(in_.bp, k, side)); }

cplx DFunction::at_infinity() const
{
    cplx J = 0.0;
    for (const auto& pc : pieces_)
        for (std::size_t j = 0; j < pc.s.size(); ++j) J += pc.w[j] * pc.F[j];
    return std::exp(-J / (2.0 * pi * I));
}

DbValue DFunction::eval_Db() const
{
    const BranchPoints& bp = in_.bp;
    const double d0 = k0_ - bp.E2;
    SpectralPoint pk0 = near_E2(bp, d0);
    const double X0 = eval_X(pk0).real();
    const double L0 = in_.log_gap(pk0);
    cplx J = 0.0;
    for (const auto& pc : pieces_) {
        bool right = !pc.cut && pc.anchor == 2;
        if (!right) {
            J += cauchy(pc, pk0);
            continue;
        }
        for (std::size_t j = 0; j < pc.s.size(); ++j) {
            double d = pc.s[j].dE2.real() - d0;
            if (d == 0.0) continue;
            J += pc.w[j] * (pc.F[j] - L0 / X0) / d;
        }
    }
    cplx lnDb = X0 / (2.0 * pi * I) * J - I * nu_ * std::log(d0);
    return {nu_, std::exp(lnDb), "real axis from the right, singular part subtracted"};
}

cplx DFunction::approach_k0(double eps, double angle) const
{
    cplx dz = std::polar(eps, angle);
    SpectralPoint z = near_E2(in_.bp, (k0_ - in_.bp.E2) + dz);
    return std::exp(log_eval(z) - I * nu_ * std::log(dz));
}

cplx damping_factor(const SpectralData& data, double zeta)
{
    const BranchPoints& bp = data.branch();
    const CriticalPoints cp = critical_points(data.triple(), zeta);
    const double a = cp.k0, b = bp.kappa_plus;
    if (b - a <= 0.0) return 1.0;
    const GaussRule& g = gauss_legendre(20);
    const int panels = 8;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            double s = mid + half * g.x[j];
            SpectralPoint q = spectral_point(bp, s);
            sum += half * g.w[j] * std::log(data.one_minus_abs_r2(q)) / eval_X(q).real();
        }
    }
    return std::exp(-sum / (pi * I));
}

void write_D_csv(std::ostream& os, const std::vector<GoldenRow>& rows)
{
    os << "# schema=1\nre_k,im_k,re_D,im_D\n" << std::setprecision(17);
    for (const auto& r : rows)
        os << r.k.real() << ',' << r.k.imag() << ',' << r.D.real() << ',' << r.D.imag() << '\n';
}

}  // namespace rhpw
