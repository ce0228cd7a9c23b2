#include "rhpw/model_cross.hpp"

#include <cmath>

#include "rhpw/quadrature.hpp"

namespace rhpw {

cplx log_gamma(cplx z)
{
    // Shift to Re z >= 15, then Stirling with Bernoulli corrections.
    cplx shift = 0.0;
    while (z.real() < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    static const double B[] = {1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680, 1.0 / 1188, -691.0 / 360360,
                               1.0 / 156, -3617.0 / 122400};
    const cplx zi = 1.0 / z, zi2 = zi * zi;
    cplx series = 0.0, p = zi;
    for (double b : B) {
        series += b * p;
        p *= zi2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series - shift;
}

double eval_nu(cplx q)
{
    double a2 = std::norm(q);
    if (!(a2 < 1.0)) throw std::domain_error("nu(q): |q| must be below 1");
    return -std::log1p(-a2) / (2.0 * pi);
}

cplx eval_betaX(cplx q)
{
    double nu = eval_nu(q);
    if (q == 0.0) return 0.0;
    double phase = 3.0 * pi / 4.0 - std::arg(-q) + log_gamma(cplx(0.0, nu)).imag();
    return std::sqrt(nu) * std::polar(1.0, phase);
}

CrossDatum cross_datum(cplx q) { return {q, eval_nu(q), eval_betaX(q)}; }

Mat2 cross_jump(cplx q, cplx z, int ray)
{
    const double nu = eval_nu(q);
    const double gap = 1.0 - std::norm(q);
    const cplx zpow = std::exp(2.0 * I * nu * std::log(z));  // z^{2 i nu}
    const cplx e = std::exp(I * z * z / 2.0);
    Mat2 v = Mat2::Identity();
    switch (ray) {
    case 1: v(1, 0) = -q / zpow * e; break;
    case 2: v(0, 1) = -std::conj(q) / gap * zpow / e; break;
    case 3: v(1, 0) = q / gap / zpow * e; break;
    case 4: v(0, 1) = std::conj(q) * zpow / e; break;
    default: throw std::invalid_argument("cross_jump: ray index must be 1..4");
    }
    return v;
}

CrossSolution solve_cross(cplx q, const CrossOptions& opt)
{
    CrossDatum datum = cross_datum(q);
    Mesh mesh;
    const double angles[4] = {pi / 4, 3 * pi / 4, -3 * pi / 4, -pi / 4};
    // Graded panels cover [0, 1]; uniform panels cover [1, z_max].
    for (int ray = 1; ray <= 4; ++ray) {
        const cplx dir = std::polar(1.0, angles[ray - 1]);
        for (const auto& iv : graded_partition(1.0, true, false, opt.levels, 2))
            mesh.add_panel({dir * iv.a, dir * iv.b, opt.inner_order, ray});
        for (int i = 0; i < opt.middle; ++i) {
            double a = 1.0 + (opt.z_max - 1.0) * i / opt.middle, b = 1.0 + (opt.z_max - 1.0) * (i + 1) / opt.middle;
            mesh.add_panel({dir * a, dir * b, opt.outer_order, ray});
        }
    }
    JumpFn v = [q](cplx z, int ray) { return cross_jump(q, z, ray); };
    RHSolution sol = solve_rhp(mesh, v);
    Mat2 m1 = sol.moment(1);
    return {std::move(sol), datum, m1};
}

}  // namespace rhpw
