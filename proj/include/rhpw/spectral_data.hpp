#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "rhpw/spectral_core.hpp"

namespace rhpw {

// r^b(k) = i (Delta - 1/Delta)/(Delta + 1/Delta) = i (Delta^2 - 1)/(Delta^2 + 1).
cplx eval_rb(const SpectralPoint& p);
cplx eval_rb(const BranchPoints& bp, cplx k, Side side = Side::none);
// Extended-precision evaluation used by the tail checks.
std::complex<long double> eval_rb_long(const BranchPoints& bp, long double k);
// Coefficients c_1..c_4 of r^b(k) = sum c_j / k^j + O(k^-5).
std::array<cplx, 4> rb_tail_coefficients(const BranchPoints& bp);

// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u);

// Shape of the taper phi with r = phi r^b, r_inf = (1 - phi) r^b. phi is 1 on
// [E1 - delta_left, E2 + delta_right], falls to 0 over width_left on the
// left, and on the right becomes linear with a simple zero at zero_point,
// after which a cutoff of width cutoff_width switches it off.
struct TaperOptions {
    bool enabled = true;  // false: r_inf = 0, so r = r^b everywhere
    double delta_left = 0.05;
    double width_left = 0.25;
    double delta_right = 0.03;
    double ramp = 0.08;
    double zero_point = 0.0;  // 0 selects kappa_plus
    double cutoff_width = 0.05;
};

class SpectralData {
public:
    SpectralData(const ParameterTriple& triple, double tau, const TaperOptions& taper = {});

    const ParameterTriple& triple() const { return triple_; }
    const BranchPoints& branch() const { return bp_; }
    double tau() const { return tau_; }
    const TaperOptions& taper() const { return taper_; }

    double profile(double k) const;
    cplx rb(const SpectralPoint& p) const { return eval_rb(p); }
    cplx r_infinity(double k) const;
    cplx r1(double k) const;
    cplx h(cplx k, Side side = Side::none) const;
    // r = r1 + h on the real line; on the cut the plus boundary value.
    cplx r(const SpectralPoint& p) const;
    cplx r(double k) const;
    // 1 - |r|^2 off the cut, accurate near the branch points where |r| -> 1.
    double one_minus_abs_r2(const SpectralPoint& p) const;
    // Continuous arg r on [E1,E2] with arg r(E2) in (-pi, pi].
    double arg_on_cut(const SpectralPoint& p) const;

    // Closed interval outside of which r vanishes identically (infinite
    // ends when the taper is disabled).
    double support_left() const { return support_left_; }
    double support_right() const { return support_right_; }

    // h_j of h ~ sum h_j / k^j.
    std::array<cplx, 4> decay_coeffs() const;

private:
    ParameterTriple triple_;
    BranchPoints bp_;
    double tau_;
    TaperOptions taper_;
    double zero_point_ = 0.0;
    double support_left_ = 0.0;
    double support_right_ = 0.0;
    std::vector<double> arg_table_;  // unwrapped arg r_+ on a uniform grid E2 -> E1
};

struct BranchExpansion {
    bool at_E1 = false;
    std::array<double, 4> q{};
    double residual = 0.0;    // max fit residual on the smallest window
    double stability = 0.0;   // max change of q_0..q_2 across windows (relative to window scale)
    double imag_part = 0.0;   // max |Im(r/i)| seen on the fit samples
};

// Least-squares fit of r/i against half-integer powers of the distance to
// the endpoint, on the off-cut side, over shrinking windows.
BranchExpansion extract_branch_coeffs(const SpectralData& data, bool at_E1);

struct ClauseResult {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string detail;
};

struct AssumptionReport {
    std::vector<ClauseResult> clauses;
    bool all_pass() const;
};

AssumptionReport validate_assumptions(const SpectralData& data);
void print_report(std::ostream& os, const AssumptionReport& rep);

// Log-log slope of |f| over a geometric grid on [a, b] (0 < a < b) for
// samples f(-x). Returns NaN if every sample vanishes.
double fitted_tail_slope(const std::vector<double>& xs, const std::vector<long double>& vals);

struct SampleRow {
    double k;
    cplx r;
    int side;  // +1 plus boundary value, -1 minus, 0 off the cut
};

std::vector<SampleRow> sample_r(const SpectralData& data, const std::vector<double>& grid);
void write_samples_csv(std::ostream& os, const std::vector<SampleRow>& rows);
std::vector<SampleRow> read_samples_csv(std::istream& is);

}  // namespace rhpw
