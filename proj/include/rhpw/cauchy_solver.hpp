#pragma once

#include <functional>
#include <vector>

#include "rhpw/common.hpp"

namespace rhpw {

// Straight oriented panel a -> b carrying `order` Gauss-Legendre nodes.
// The plus side is to the left of the direction of travel.
struct Panel {
    cplx a{};
    cplx b{};
    int order = 16;
    int tag = 0;  // caller's label for the piece of contour the panel belongs to
};

class Mesh {
public:
    void add_panel(const Panel& p);
    // Splits a -> b into panels, dyadically refined toward the flagged ends.
    void add_segment(cplx a, cplx b, int tag, bool grade_a, bool grade_b, int levels, int middle, int order);

    std::size_t size() const { return z_.size(); }
    const std::vector<Panel>& panels() const { return panels_; }
    std::size_t first_node(std::size_t panel) const { return first_[panel]; }
    const std::vector<cplx>& nodes() const { return z_; }
    const std::vector<cplx>& weights() const { return w_; }  // complex arc weights ds
    const std::vector<int>& panel_of() const { return panel_of_; }
    // Point of panel p at local parameter tau in [-1, 1].
    cplx point(std::size_t p, double tau) const;

private:
    std::vector<Panel> panels_;
    std::vector<std::size_t> first_;
    std::vector<cplx> z_, w_;
    std::vector<int> panel_of_;
};

// Weights c_j with  int_panel f(s)/(s - z) ds ~ sum_j c_j f(s_j), exact when f
// is a polynomial of degree < order on the panel. For z on the open panel the
// side selects the boundary value.
void cauchy_panel_weights(const Panel& p, cplx z, Side side, cplx* out);

using JumpFn = std::function<Mat2(cplx z, int tag)>;

struct SolverOptions {
    int refinement_steps = 2;
    double rcond_floor = 1e-14;  // smaller estimates raise ConvergenceError
    // Above this many unknowns the LU overwrites the system matrix and
    // residuals are formed by re-assembling rows.
    long in_place_above = 6000;
};

// Solution of m_+ = m_- v, m -> I, written as m = I + C(mu (v - I)) with mu = m_-.
class RHSolution {
public:
    RHSolution() = default;
    RHSolution(Mesh mesh, std::vector<Mat2> vmI, std::vector<Mat2> mu, double rcond, double residual);

    const Mesh& mesh() const { return mesh_; }
    const std::vector<Mat2>& mu() const { return mu_; }
    double rcond() const { return rcond_; }
    double residual() const { return residual_; }

    // m_j = -(1/(2 pi i)) int mu (v - I) s^{j-1} ds, so m = I + m_1/z + m_2/z^2 + ...
    Mat2 moment(int j) const;
    Mat2 eval(cplx z) const;
    // Boundary value at the point of panel p with local parameter tau.
    Mat2 boundary(std::size_t p, double tau, Side side) const;
    // Largest |m_+ - m_- v| / max(1, |m_-| |v|) over `count` off-mesh points
    // spread over the panels where v differs from I.
    double probe(const JumpFn& v, int count = 12) const;

private:
    Mat2 cauchy_sum(cplx z, std::ptrdiff_t own_panel, Side side) const;

    Mesh mesh_;
    std::vector<Mat2> vmI_;
    std::vector<Mat2> F_;  // mu (v - I) at the nodes
    std::vector<Mat2> mu_;
    double rcond_ = 0.0;
    double residual_ = 0.0;
};

RHSolution solve_rhp(const Mesh& mesh, const JumpFn& v, const SolverOptions& opt = {});

}  // namespace rhpw
