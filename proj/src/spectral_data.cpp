#include "rhpw/spectral_data.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

namespace rhpw {

cplx eval_rb(const SpectralPoint& p)
{
    cplx d2 = eval_Delta2(p);
    return I * (d2 - 1.0) / (d2 + 1.0);
}

cplx eval_rb(const BranchPoints& bp, cplx k, Side side) { return eval_rb(spectral_point(bp, k, side)); }

std::complex<long double> eval_rb_long(const BranchPoints& bp, long double k)
{
    using lc = std::complex<long double>;
    // Off the cut on the real line Delta^2 is real and positive.
    long double a = k - static_cast<long double>(bp.E2);
    long double b = k - static_cast<long double>(bp.E1);
    long double d2 = std::sqrt(a / b);
    return lc(0.0L, 1.0L) * ((d2 - 1.0L) / (d2 + 1.0L));
}

namespace {

using Series = std::array<long double, 6>;

// Power series in w = 1/k of r^b / i.
Series rb_series(const BranchPoints& bp)
{
    const long double E1 = bp.E1, E2 = bp.E2;
    Series geo{}, A{}, S{}, N{}, M{}, Q{};
    long double pw = 1.0L;
    for (auto& g : geo) { g = pw; pw *= E1; }
    for (int n = 0; n < 6; ++n) A[n] = geo[n] - (n > 0 ? E2 * geo[n - 1] : 0.0L);
    S[0] = 1.0L;
    for (int n = 1; n < 6; ++n) {
        long double acc = A[n];
        for (int j = 1; j < n; ++j) acc -= S[j] * S[n - j];
        S[n] = acc / 2.0L;
    }
    for (int n = 0; n < 6; ++n) { N[n] = S[n] - (n == 0); M[n] = S[n] + (n == 0); }
    for (int n = 0; n < 6; ++n) {
        long double acc = N[n];
        for (int j = 1; j <= n; ++j) acc -= M[j] * Q[n - j];
        Q[n] = acc / M[0];
    }
    return Q;
}

}  // namespace

std::array<cplx, 4> rb_tail_coefficients(const BranchPoints& bp)
{
    Series q = rb_series(bp);
    std::array<cplx, 4> c;
    for (int j = 0; j < 4; ++j) c[j] = I * static_cast<double>(q[j + 1]);
    return c;
}

double smooth_step(double u)
{
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    double a = std::exp(-1.0 / u);
    double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

SpectralData::SpectralData(const ParameterTriple& triple, double tau, const TaperOptions& taper)
    : triple_(triple), bp_(branch_points(triple)), tau_(tau), taper_(taper)
{
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0,1]");
    zero_point_ = taper_.zero_point > 0.0 ? taper_.zero_point : bp_.kappa_plus;
    if (taper_.enabled) {
        double ks = bp_.E2 + taper_.delta_right;
        if (!(ks + taper_.ramp < zero_point_))
            throw std::invalid_argument("taper ramp does not fit below its zero point");
        support_left_ = bp_.E1 - taper_.delta_left - taper_.width_left;
        support_right_ = zero_point_ + taper_.cutoff_width;
    } else {
        support_left_ = -std::numeric_limits<double>::infinity();
        support_right_ = std::numeric_limits<double>::infinity();
    }

    // Unwrapped arg r_+ along the cut from E2 to E1.
    const int n = 4001;
    arg_table_.resize(n);
    const double L = bp_.E2 - bp_.E1;
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        double off = -L * (i + 0.5) / n;
        double a = std::arg(r(near_E2(bp_, off, Side::plus)));
        if (i > 0) {
            while (a - prev > pi) a -= 2.0 * pi;
            while (a - prev < -pi) a += 2.0 * pi;
        }
        arg_table_[i] = prev = a;
    }
    // Anchor at E2 in (-pi, pi].
    double a0 = std::arg(r(near_E2(bp_, cplx(-1e-300, 0.0), Side::plus)));
    double shift = a0 - arg_table_[0];
    shift = 2.0 * pi * std::round(shift / (2.0 * pi));
    for (auto& a : arg_table_) a += shift;
}

double SpectralData::profile(double k) const
{
    if (!taper_.enabled) return 1.0;
    const auto& T = taper_;
    if (k < bp_.E1 - T.delta_left)
        return smooth_step((k - support_left_) / T.width_left);
    double ks = bp_.E2 + T.delta_right;
    if (k <= ks) return 1.0;
    double lin = 1.0 - smooth_step((k - ks) / T.ramp) * (k - ks) / (zero_point_ - ks);
    return lin * (1.0 - smooth_step((k - zero_point_) / T.cutoff_width));
}

cplx SpectralData::r_infinity(double k) const
{
    double phi = profile(k);
    if (phi == 1.0) return 0.0;
    return (1.0 - phi) * eval_rb(bp_, k, Side::plus);
}

cplx SpectralData::r1(double k) const
{
    return (profile(k) - tau_) * eval_rb(bp_, k, Side::plus);
}

cplx SpectralData::h(cplx k, Side side) const
{
    if (tau_ == 0.0) return 0.0;
    return tau_ * eval_rb(bp_, k, side == Side::none && k.imag() == 0.0 ? Side::plus : side);
}

cplx SpectralData::r(const SpectralPoint& p) const
{
    SpectralPoint q = p;
    if (q.side == Side::none) q.side = Side::plus;
    double phi = profile(p.k.real());
    if (phi == 0.0) return 0.0;
    return phi * eval_rb(q);
}

cplx SpectralData::r(double k) const { return r(spectral_point(bp_, k, Side::plus)); }

double SpectralData::one_minus_abs_r2(const SpectralPoint& p) const
{
    double phi = profile(p.k.real());
    if (phi == 0.0) return 1.0;
    cplx d = eval_Delta2(p);
    double gap_b = 4.0 * d.real() / std::norm(1.0 + d);
    return (1.0 - phi) * (1.0 + phi) + phi * phi * gap_b;
}

double SpectralData::arg_on_cut(const SpectralPoint& p) const
{
    const double L = bp_.E2 - bp_.E1;
    const int n = static_cast<int>(arg_table_.size());
    double pos = (-p.dE2.real() / L) * n - 0.5;
    int i = std::clamp(static_cast<int>(std::lround(pos)), 0, n - 1);
    double ref = arg_table_[i];
    double a = std::arg(r(p));
    return a + 2.0 * pi * std::round((ref - a) / (2.0 * pi));
}

std::array<cplx, 4> SpectralData::decay_coeffs() const
{
    auto c = rb_tail_coefficients(bp_);
    for (auto& x : c) x *= tau_;
    return c;
}

BranchExpansion extract_branch_coeffs(const SpectralData& data, bool at_E1)
{
    const BranchPoints& bp = data.branch();
    const double L = bp.E2 - bp.E1;
    const int ns = 48, nl = 8;
    BranchExpansion out;
    out.at_E1 = at_E1;
    std::array<double, 4> prev{};
    bool have_prev = false;
    for (double frac : {1e-2, 1e-3, 1e-4}) {
        const double W = frac * L;
        Eigen::MatrixXd A(ns, nl);
        Eigen::VectorXd b(ns);
        double imag_max = 0.0;
        for (int i = 0; i < ns; ++i) {
            double s = 0.5 * (1.0 - std::cos(pi * (i + 0.5) / ns));  // in (0,1)
            double d = W * s * s;
            SpectralPoint p = at_E1 ? near_E1(bp, -d) : near_E2(bp, d);
            cplx v = data.r(p) / I;
            imag_max = std::max(imag_max, std::abs(v.imag()));
            b(i) = v.real();
            double pw = 1.0;
            for (int l = 0; l < nl; ++l) { A(i, l) = pw; pw *= s; }
        }
        Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
        double resid = (A * c - b).cwiseAbs().maxCoeff();
        std::array<double, 4> q{};
        for (int l = 0; l < 4; ++l) {
            double qi = c(l) / std::pow(W, 0.5 * l);
            if (at_E1 && (l % 2 == 1)) qi = -qi;
            q[l] = qi;
        }
        if (have_prev) {
            double st = 0.0;
            for (int l = 0; l < 3; ++l)
                st = std::max(st, std::abs(q[l] - prev[l]) / std::max(1.0, std::abs(q[l])));
            out.stability = std::max(out.stability, st);
        }
        prev = q;
        have_prev = true;
        out.q = q;
        out.residual = resid;
        out.imag_part = std::max(out.imag_part, imag_max);
    }
    return out;
}

bool AssumptionReport::all_pass() const
{
    return std::all_of(clauses.begin(), clauses.end(), [](const ClauseResult& c) { return c.pass; });
}

double fitted_tail_slope(const std::vector<double>& xs, const std::vector<long double>& vals)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (vals[i] == 0.0L) continue;
        double lx = std::log(xs[i]);
        double ly = static_cast<double>(std::log(std::abs(vals[i])));
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++n;
    }
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

AssumptionReport validate_assumptions(const SpectralData& data)
{
    AssumptionReport rep;
    const BranchPoints& bp = data.branch();
    const double L = bp.E2 - bp.E1;
    auto add = [&](std::string name, bool pass, double value, std::string detail = {}) {
        rep.clauses.push_back({std::move(name), pass, value, std::move(detail)});
    };

    // |r| < 1 off the cut on (-inf, kappa_+].
    {
        double left = std::isfinite(data.support_left()) ? data.support_left() : bp.E1 - 50.0;
        double mx = 0.0;
        const int n = 4000;
        for (int i = 0; i < n; ++i) {
            double k = left + (bp.E1 - left) * (i + 0.5) / n;
            mx = std::max(mx, std::abs(data.r(k)));
            double k2 = bp.E2 + (bp.kappa_plus - bp.E2) * (i + 0.5) / n;
            mx = std::max(mx, std::abs(data.r(k2)));
        }
        add("off_cut_bound", mx < 1.0, mx, "max |r| on (-inf,E1) u (E2,kappa_+]");
    }
    // |r| = 1 on the cut, r != +-i inside.
    double min_pm_i = std::numeric_limits<double>::infinity();
    {
        double dev = 0.0;
        const int n = 2000;
        for (int i = 0; i < n; ++i) {
            double off = -L * (1e-6 + (1.0 - 2e-6) * (i + 0.5) / n);
            cplx v = data.r(near_E2(bp, off, Side::plus));
            dev = std::max(dev, std::abs(std::abs(v) - 1.0));
            min_pm_i = std::min({min_pm_i, std::abs(v - I), std::abs(v + I)});
        }
        add("on_cut_unimodular", dev < 1e-12, dev, "max ||r_+|-1| on (E1,E2)");
    }
    add("not_pm_i_inside_cut", min_pm_i > 1e-12, min_pm_i, "min |r -+ i| on interior grid");
    {
        cplx e2 = data.r(near_E2(bp, cplx(-1e-300, 0.0), Side::plus));
        cplx e1 = data.r(near_E1(bp, cplx(-1e-300, 0.0)));
        double d = std::max(std::min(std::abs(e2 - I), std::abs(e2 + I)),
                            std::min(std::abs(e1 - I), std::abs(e1 + I)));
        add("endpoint_values_pm_i", d < 1e-10, d, "r(E1), r(E2) in {+i,-i}");
    }
    {
        double a2 = data.arg_on_cut(near_E2(bp, cplx(-1e-12 * L, 0.0), Side::plus));
        double jump = 0.0, prev = a2;
        for (int i = 1; i <= 2000; ++i) {
            double a = data.arg_on_cut(near_E2(bp, cplx(-L * i / 2001.0, 0.0), Side::plus));
            jump = std::max(jump, std::abs(a - prev));
            prev = a;
        }
        bool ok = a2 > -pi && a2 <= pi && jump < 0.1;
        add("arg_continuous_on_cut", ok, jump, "max step of unwrapped arg r_+ on a 2000-point grid");
    }
    {
        double v = std::abs(data.r(bp.kappa_plus));
        add("r_at_kappa_plus_zero", v < 1e-12, v, "|r(kappa_+)|");
    }

    // Tails at infinity, measured in extended precision.
    std::vector<double> xs;
    for (int i = 0; i <= 20; ++i) xs.push_back(std::pow(10.0, 2.0 + 2.0 * i / 20.0));
    auto rb_long = [&](long double k) { return eval_rb_long(bp, k); };
    auto c = rb_series(bp);
    auto partial = [&](long double k) {
        long double s = 0.0L, w = 1.0L / k, pw = w;
        for (int j = 1; j <= 4; ++j) { s += c[j] * pw; pw *= w; }
        return s;  // imaginary part of the truncated r^b series
    };
    const long double tau = data.tau();
    auto slope_clause = [&](const std::string& name, auto f) {
        std::vector<long double> vals;
        for (double x : xs) vals.push_back(f(x));
        double s = fitted_tail_slope(xs, vals);
        if (std::isnan(s))
            add(name, true, -std::numeric_limits<double>::infinity(), "identically zero tail");
        else
            add(name, s <= -5.0 + 0.2, s, "fitted log-log slope over |k| in [1e2,1e4]");
    };
    slope_clause("tail_r1", [&](double x) {
        long double k = -x;
        long double phi = data.profile(static_cast<double>(k));
        return (phi - tau) * rb_long(k).imag() + tau * partial(k);
    });
    slope_clause("tail_h", [&](double x) {
        long double k = x;
        return tau * (rb_long(k).imag() - partial(k));
    });
    slope_clause("tail_r", [&](double x) {
        long double k = -x;
        long double phi = data.profile(static_cast<double>(k));
        return phi * rb_long(k).imag();
    });

    for (bool e1 : {false, true}) {
        BranchExpansion be = extract_branch_coeffs(data, e1);
        int i = e1 ? 1 : 2;
        double q0 = be.q[0], q1 = be.q[1], q2 = be.q[2];
        double unit = std::abs(std::abs(q0) - 1.0);
        double sign = (i % 2 == 0 ? 1.0 : -1.0) * q0 * q1;
        double rel = std::abs(2.0 * q0 * q2 - q1 * q1);
        bool ok = unit < 1e-6 && sign < 0.0 && rel < 1e-6 && be.stability < 1e-5 && be.imag_part < 1e-10;
        std::ostringstream os;
        os << std::setprecision(10) << "q0=" << q0 << " q1=" << q1 << " q2=" << q2 << " q3=" << be.q[3]
           << " |2q0q2-q1^2|=" << rel << " stability=" << be.stability;
        add(std::string("branch_coeffs_E") + (e1 ? "1" : "2"), ok, std::max(unit, rel), os.str());
    }
    return rep;
}

void print_report(std::ostream& os, const AssumptionReport& rep)
{
    for (const auto& c : rep.clauses)
        os << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << std::setprecision(6) << c.value << "  "
           << c.detail << '\n';
}

std::vector<SampleRow> sample_r(const SpectralData& data, const std::vector<double>& grid)
{
    std::vector<SampleRow> rows;
    const BranchPoints& bp = data.branch();
    for (double k : grid) {
        bool cut = k > bp.E1 && k < bp.E2;
        rows.push_back({k, data.r(k), cut ? 1 : 0});
    }
    return rows;
}

void write_samples_csv(std::ostream& os, const std::vector<SampleRow>& rows)
{
    os << "# schema=1\nk,re_r,im_r,side\n" << std::setprecision(17);
    for (const auto& r : rows) os << r.k << ',' << r.r.real() << ',' << r.r.imag() << ',' << r.side << '\n';
}

std::vector<SampleRow> read_samples_csv(std::istream& is)
{
    std::vector<SampleRow> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'k') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double k, re, im;
        int side;
        if (!(ls >> k >> re >> im >> side)) throw std::runtime_error("malformed sample row: " + line);
        rows.push_back({k, cplx(re, im), side});
    }
    return rows;
}

}  // namespace rhpw
