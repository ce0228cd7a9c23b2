#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rhpw/spectral_data.hpp"

namespace rhpw {

// What the D-function needs from the spectral data.
struct DInputs {
    BranchPoints bp;
    std::function<double(const SpectralPoint&)> log_gap;  // ln(1 - |r|^2) off the cut
    std::function<double(const SpectralPoint&)> arg_cut;  // continuous arg r_+ on the cut
    double support_left = 0.0;  // ln(1-|r|^2) vanishes left of this point
};

DInputs d_inputs(const SpectralData& data);

struct DOptions {
    int order = 12;     // Gauss points per panel
    int levels = 48;    // dyadic levels toward each singular end
    int middle = 16;    // uniform panels in between
    double R_left = 0.0;  // truncation distance left of E1 when the support is unbounded (0: 1e3 (E2-E1))
};

struct DbValue {
    double nu = 0.0;
    cplx value{};
    std::string direction;
};

// D(zeta, k) = exp( X(k)/(2 pi i) { int_{(-inf,E1) u (E2,k0)} ln(1-|r|^2)/(X (s-k)) ds
//                                  + int_{(E1,E2)} i arg r / (X_+ (s-k)) ds } ).
class DFunction {
public:
    DFunction(const DInputs& in, double zeta, const DOptions& opt = {});
    DFunction(const SpectralData& data, double zeta, const DOptions& opt = {});

    double zeta() const { return zeta_; }
    double k0() const { return k0_; }
    std::size_t node_count() const;

    cplx eval(const SpectralPoint& p) const;
    cplx eval(cplx k, Side side = Side::none) const;
    cplx log_eval(const SpectralPoint& p) const;
    cplx at_infinity() const;

    double nu() const { return nu_; }
    // lim_{z -> k0, z > k0} (z-k0)^{-i nu} D(z) by singularity subtraction.
    DbValue eval_Db() const;
    // (z-k0)^{-i nu} D(z) at z = k0 + eps e^{i angle}, principal power.
    cplx approach_k0(double eps, double angle) const;

private:
    struct Piece {
        double a = 0.0, b = 0.0;  // s-range
        int anchor = 2;           // endpoint offsets are taken from: 1 -> E1, 2 -> E2
        bool cut = false;
        bool singular_a = false, singular_b = false;
        std::vector<SpectralPoint> s;
        std::vector<double> w;
        std::vector<cplx> F;
    };

    cplx density(const Piece& pc, const SpectralPoint& p) const;
    cplx offset(const Piece& pc, const SpectralPoint& p) const;
    cplx cauchy(const Piece& pc, const SpectralPoint& k) const;
    void add_piece(double anchor_value, int anchor, double sign, double ulen, bool cut, bool grade_far,
                   const DOptions& opt);

    DInputs in_;
    double zeta_;
    double k0_;
    double nu_ = 0.0;
    std::vector<Piece> pieces_;
};

// exp(-(1/(pi i)) int_{k0}^{kappa_+} ln(1-|r|^2)/X ds): the unimodular damping
// factor of the leading plane wave.
cplx damping_factor(const SpectralData& data, double zeta);

struct GoldenRow {
    cplx k;
    cplx D;
};
void write_D_csv(std::ostream& os, const std::vector<GoldenRow>& rows);

}  // namespace rhpw
