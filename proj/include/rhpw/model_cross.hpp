#pragma once

#include "rhpw/cauchy_solver.hpp"

namespace rhpw {

// log Gamma(z) for z away from the poles; Im part is a continuous argument
// along horizontal lines in the right half plane.
cplx log_gamma(cplx z);

// nu(q) = -(1/(2 pi)) ln(1 - |q|^2), |q| < 1.
double eval_nu(cplx q);
// beta^X(q) = sqrt(nu) exp(i (3 pi/4 - arg(-q) + arg Gamma(i nu))), 0 for q = 0.
cplx eval_betaX(cplx q);

struct CrossDatum {
    cplx q;
    double nu = 0.0;
    cplx betaX;
};
CrossDatum cross_datum(cplx q);

// Jump on the four rays X_1..X_4 at angles pi/4, 3pi/4, -3pi/4, -pi/4,
// oriented away from the origin; z^{2 i nu} uses the principal logarithm.
Mat2 cross_jump(cplx q, cplx z, int ray);

struct CrossOptions {
    double z_max = 12.0;
    int levels = 26;       // dyadic panels toward the origin
    int inner_order = 8;   // nodes on the graded panels
    int middle = 10;       // uniform panels out to z_max
    int outer_order = 12;
};

struct CrossSolution {
    RHSolution sol;
    CrossDatum datum;
    Mat2 m1;  // coefficient of 1/z in m^X
};

CrossSolution solve_cross(cplx q, const CrossOptions& opt = {});

}  // namespace rhpw
