#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rhpw/cauchy_solver.hpp"
#include "rhpw/spectral_data.hpp"

namespace rhpw {

// raw: phases e^{+-2i(kx + 2k^2 t)} as in the original problem.
// g_conjugated: m e^{it(g - kx/t - 2k^2)sigma3} normalized at infinity; jumps
// carry e^{+-2itg} and the cut jump (0, conj r; -r, e^{-2itg_+}).
enum class JumpMode { raw, g_conjugated };

struct ContourOptions {
    int order = 32;            // nodes on the panels away from E1, E2
    int inner_order = 12;      // nodes on the dyadic panels at E1, E2
    int levels = 26;           // dyadic levels toward E1 and E2
    double panel_phase = 24.0; // largest phase change of the exponential across a panel
    double refine = 1.0;       // 2 doubles the mesh density
};

// The h-jumps on the curves through kappa_+ are folded onto the real line
// (h is analytic between the curves and the axis), leaving the single jump
// (1-|r|^2, conj r e^{-2i theta}; -r e^{2i theta}, 1) on the support of r.
// Tags: 0 off the cut, 1 on (E1, E2).
struct Contour {
    Mesh mesh;
    double left = 0.0, right = 0.0;
    std::vector<double> breakpoints;
};

Contour build_contour(const SpectralData& data, double x, double t, JumpMode mode, const ContourOptions& opt = {});

// The jump matrix of the chosen mode at a point of the contour.
JumpFn assemble_jump(const SpectralData& data, double x, double t, JumpMode mode);

struct OracleResult {
    double x = 0.0, t = 0.0;
    JumpMode mode = JumpMode::g_conjugated;
    cplx u;
    Mat2 m1;
    double probe = 0.0;
    double rcond = 0.0;
    double residual = 0.0;
    std::size_t nodes = 0;
};

struct OracleOptions {
    ContourOptions contour;
    SolverOptions solver;
    double probe_tol = 1e-6;  // larger jump mismatch raises ConvergenceError
    int probe_points = 12;
};

// u from the 1/k moment: -2i D(0,inf)^2 (m_1)_12, with the factor e^{2itg_inf}
// restoring the raw normalization in g mode.
cplx extract_u(const Mat2& m1, cplx D0inf, cplx phase = 1.0);

class Oracle {
public:
    explicit Oracle(const SpectralData& data, const OracleOptions& opt = {});

    const SpectralData& data() const { return data_; }
    cplx D0_infinity() const { return d0inf_; }
    const OracleOptions& options() const { return opt_; }

    OracleResult solve(double x, double t, JumpMode mode = JumpMode::g_conjugated) const;
    // Same on a caller-supplied mesh, e.g. one loaded from the cache.
    OracleResult solve_on(const Mesh& mesh, double x, double t, JumpMode mode = JumpMode::g_conjugated) const;
    // Fourth-order central difference of u in x.
    cplx ux(double x, double t, double h, JumpMode mode = JumpMode::g_conjugated) const;

private:
    SpectralData data_;
    OracleOptions opt_;
    cplx d0inf_;
};

// Lattice samples u(x0 + i hx, t0 + j ht), i < nx, j < nt, stored row-major in i.
struct Lattice {
    double x0 = 0.0, t0 = 0.0, hx = 0.0, ht = 0.0;
    int nx = 0, nt = 0;
    std::vector<cplx> u;
    cplx& at(int i, int j) { return u[std::size_t(i) * nt + j]; }
    cplx at(int i, int j) const { return u[std::size_t(i) * nt + j]; }
};

// i u_t + u_xx - 2|u|^2 u by second-order central differences at the
// interior lattice points; result is (nx-2) x (nt-2), row-major.
std::vector<cplx> nls_residual(const Lattice& lat);

void write_solution_csv(std::ostream& os, const std::vector<OracleResult>& rows,
                        const std::vector<double>& residuals = {});

// Binary panel cache. The key names the triple, taper, zeta, the time rounded
// up to an integer and the mesh knobs.
std::string mesh_cache_key(const SpectralData& data, double zeta, double t, JumpMode mode, const ContourOptions& opt);
bool save_mesh(const std::string& path, const Mesh& mesh);
bool load_mesh(const std::string& path, Mesh& mesh);

}  // namespace rhpw
