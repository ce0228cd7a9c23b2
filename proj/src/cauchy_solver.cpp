#include "rhpw/cauchy_solver.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "rhpw/parallel.hpp"
#include "rhpw/quadrature.hpp"

namespace rhpw {

namespace {

// L(k, j) = (2k+1)/2 w_j P_k(x_j): maps node values to Legendre coefficients.
const Eigen::MatrixXd& legendre_analysis(int n)
{
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Eigen::MatrixXd>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) {
        const GaussRule& g = gauss_legendre(n);
        auto L = std::make_unique<Eigen::MatrixXd>(n, n);
        for (int j = 0; j < n; ++j) {
            double prev = 0.0, cur = 1.0;
            for (int k = 0; k < n; ++k) {
                (*L)(k, j) = (2.0 * k + 1.0) / 2.0 * g.w[j] * cur;
                double next = ((2.0 * k + 1.0) * g.x[j] * cur - k * prev) / (k + 1.0);
                prev = cur;
                cur = next;
            }
        }
        slot = std::move(L);
    }
    return *slot;
}

// Moments I_k = int_{-1}^{1} P_k(t)/(t - tau) dt, k < n. These equal -2 Q_k(tau).
void legendre_cauchy_moments(cplx tau, Side side, double rho, int n, cplx* I_k)
{
    cplx I0;
    if (side != Side::none) {
        double x = tau.real();
        I0 = cplx(std::log((1.0 - x) / (1.0 + x)), side == Side::plus ? pi : -pi);
    } else {
        I0 = std::log((tau - 1.0) / (tau + 1.0));
    }
    if (side != Side::none || rho < 1.1) {
        I_k[0] = I0;
        if (n > 1) I_k[1] = tau * I0 + 2.0;
        for (int k = 1; k + 1 < n; ++k) I_k[k + 1] = ((2.0 * k + 1.0) * tau * I_k[k] - double(k) * I_k[k - 1]) / double(k + 1);
        return;
    }
    // Backward recurrence for the minimal solution, normalized by I_0.
    const int K = n + 1 + int(std::ceil(19.5 / std::log(rho)));
    std::vector<cplx> y(K + 2);
    y[K + 1] = 0.0;
    y[K] = 1e-200;
    for (int k = K; k >= 1; --k) {
        y[k - 1] = ((2.0 * k + 1.0) * tau * y[k] - double(k + 1) * y[k + 1]) / double(k);
        if (std::abs(y[k - 1]) > 1e200) {
            for (int m = k - 1; m <= K + 1; ++m) y[m] *= 1e-200;
        }
    }
    cplx scale = I0 / y[0];
    for (int k = 0; k < n; ++k) I_k[k] = y[k] * scale;
}

}  // namespace

void Mesh::add_panel(const Panel& p)
{
    const GaussRule& g = gauss_legendre(p.order);
    first_.push_back(z_.size());
    const cplx mid = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
    for (int j = 0; j < p.order; ++j) {
        z_.push_back(mid + h * g.x[j]);
        w_.push_back(h * g.w[j]);
        panel_of_.push_back(int(panels_.size()));
    }
    panels_.push_back(p);
}

void Mesh::add_segment(cplx a, cplx b, int tag, bool grade_a, bool grade_b, int levels, int middle, int order)
{
    const double len = std::abs(b - a);
    const cplx dir = (b - a) / len;
    for (const auto& iv : graded_partition(len, grade_a, grade_b, levels, middle))
        add_panel({a + dir * iv.a, iv.b >= len ? b : a + dir * iv.b, order, tag});
}

cplx Mesh::point(std::size_t p, double tau) const
{
    const Panel& pn = panels_[p];
    return 0.5 * (pn.a + pn.b) + 0.5 * (pn.b - pn.a) * tau;
}

void cauchy_panel_weights(const Panel& p, cplx z, Side side, cplx* out)
{
    const int n = p.order;
    const GaussRule& g = gauss_legendre(n);
    const cplx mid = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
    cplx tau = (z - mid) / h;
    double rho = 1.0;
    if (side != Side::none) {
        tau = tau.real();
    } else {
        cplx s = std::sqrt(tau - 1.0) * std::sqrt(tau + 1.0);
        rho = std::max(std::abs(tau + s), std::abs(tau - s));
        // Plain Gauss is accurate to rho^{-2n}.
        if (2.0 * n * std::log(rho) > 37.0) {
            for (int j = 0; j < n; ++j) out[j] = g.w[j] / (g.x[j] - tau);
            return;
        }
    }
    cplx Ik[256];
    legendre_cauchy_moments(tau, side, rho, n, Ik);
    const Eigen::MatrixXd& L = legendre_analysis(n);
    for (int j = 0; j < n; ++j) {
        cplx s = 0.0;
        for (int k = 0; k < n; ++k) s += Ik[k] * L(k, j);
        out[j] = s;
    }
}

RHSolution::RHSolution(Mesh mesh, std::vector<Mat2> vmI, std::vector<Mat2> mu, double rcond, double residual)
    : mesh_(std::move(mesh)), vmI_(std::move(vmI)), mu_(std::move(mu)), rcond_(rcond), residual_(residual)
{
    F_.resize(mu_.size());
    for (std::size_t j = 0; j < mu_.size(); ++j) F_[j] = mu_[j] * vmI_[j];
}

Mat2 RHSolution::moment(int j) const
{
    Mat2 m = Mat2::Zero();
    const auto& z = mesh_.nodes();
    const auto& w = mesh_.weights();
    for (std::size_t i = 0; i < z.size(); ++i) m += (w[i] * std::pow(z[i], j - 1)) * F_[i];
    return m * (-1.0 / (2.0 * pi * I));
}

Mat2 RHSolution::cauchy_sum(cplx z, std::ptrdiff_t own_panel, Side side) const
{
    Mat2 sum = Mat2::Zero();
    cplx c[256];
    const auto& panels = mesh_.panels();
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const std::size_t f = mesh_.first_node(p);
        bool active = false;
        for (int j = 0; j < panels[p].order; ++j) active = active || !F_[f + j].isZero(0.0);
        if (!active) continue;
        cauchy_panel_weights(panels[p], z, std::ptrdiff_t(p) == own_panel ? side : Side::none, c);
        for (int j = 0; j < panels[p].order; ++j) sum += c[j] * F_[f + j];
    }
    return Mat2::Identity() + sum / (2.0 * pi * I);
}

Mat2 RHSolution::eval(cplx z) const { return cauchy_sum(z, -1, Side::none); }

Mat2 RHSolution::boundary(std::size_t p, double tau, Side side) const
{
    return cauchy_sum(mesh_.point(p, tau), std::ptrdiff_t(p), side);
}

double RHSolution::probe(const JumpFn& v, int count) const
{
    std::vector<std::size_t> active;
    const auto& panels = mesh_.panels();
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const std::size_t f = mesh_.first_node(p);
        bool a = false;
        for (int j = 0; j < panels[p].order; ++j) a = a || !vmI_[f + j].isZero(0.0);
        if (a) active.push_back(p);
    }
    double worst = 0.0;
    if (active.empty()) return worst;
    for (int k = 0; k < count; ++k) {
        std::size_t p = active[(2 * k + 1) * active.size() / (2 * count)];
        const GaussRule& g = gauss_legendre(panels[p].order);
        int mid = panels[p].order / 2;
        double tau = mid > 0 ? 0.5 * (g.x[mid - 1] + g.x[mid]) : 0.5;
        Mat2 mp = boundary(p, tau, Side::plus), mm = boundary(p, tau, Side::minus);
        Mat2 vz = v(mesh_.point(p, tau), panels[p].tag);
        double scale = std::max(1.0, mm.cwiseAbs().maxCoeff() * vz.cwiseAbs().maxCoeff());
        worst = std::max(worst, (mp - mm * vz).cwiseAbs().maxCoeff() / scale);
    }
    return worst;
}

RHSolution solve_rhp(const Mesh& mesh, const JumpFn& v, const SolverOptions& opt)
{
    const std::size_t N = mesh.size();
    const auto& z = mesh.nodes();
    const auto& panels = mesh.panels();
    std::vector<Mat2> vmI(N);
    for (std::size_t j = 0; j < N; ++j) vmI[j] = v(z[j], panels[mesh.panel_of()[j]].tag) - Mat2::Identity();

    std::vector<char> active(panels.size(), 0);
    for (std::size_t p = 0; p < panels.size(); ++p)
        for (int j = 0; j < panels[p].order; ++j)
            if (!vmI[mesh.first_node(p) + j].isZero(0.0)) active[p] = 1;

    const Eigen::Index n2 = Eigen::Index(2 * N);
    const cplx k2pi = 1.0 / (2.0 * pi * I);
    // Rows 2i and 2i+1 of the system: row(d, 2j+c) = delta - K_ij (v_j - I)(c, d).
    auto assemble = [&](int i, auto&& emit) {
        cplx c[256];
        const int own = mesh.panel_of()[i];
        for (std::size_t p = 0; p < panels.size(); ++p) {
            if (!active[p]) continue;
            cauchy_panel_weights(panels[p], z[i], int(p) == own ? Side::minus : Side::none, c);
            const std::size_t f = mesh.first_node(p);
            for (int j = 0; j < panels[p].order; ++j) {
                const Mat2& V = vmI[f + j];
                const cplx K = c[j] * k2pi;
                for (int cc = 0; cc < 2; ++cc)
                    for (int d = 0; d < 2; ++d) emit(d, Eigen::Index(2 * (f + j) + cc), -K * V(cc, d));
            }
        }
    };

    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n2, 2);
    for (std::size_t i = 0; i < N; ++i) {
        B(2 * i, 0) = 1.0;
        B(2 * i + 1, 1) = 1.0;
    }
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n2, n2);
    parallel_for(int(N), [&](int i) {
        assemble(i, [&](int d, Eigen::Index col, cplx val) { A(2 * i + d, col) += val; });
    });

    const bool in_place = n2 > opt.in_place_above;
    // B - A X without the stored matrix.
    auto defect = [&](const Eigen::MatrixXcd& X) {
        Eigen::MatrixXcd R = B - X;
        parallel_for(int(N), [&](int i) {
            assemble(i, [&](int d, Eigen::Index col, cplx val) {
                R(2 * i + d, 0) -= val * X(col, 0);
                R(2 * i + d, 1) -= val * X(col, 1);
            });
        });
        return R;
    };

    Eigen::MatrixXcd X;
    double rcond = 0.0, residual = 0.0;
    if (in_place) {
        Eigen::PartialPivLU<Eigen::Ref<Eigen::MatrixXcd>> lu(A);
        rcond = lu.rcond();
        if (!(rcond > opt.rcond_floor)) throw ConvergenceError("RH solve: system is numerically singular");
        X = lu.solve(B);
        for (int s = 0; s < opt.refinement_steps; ++s) X += lu.solve(defect(X));
        residual = defect(X).cwiseAbs().maxCoeff();
    } else {
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
        rcond = lu.rcond();
        if (!(rcond > opt.rcond_floor)) throw ConvergenceError("RH solve: system is numerically singular");
        X = lu.solve(B);
        for (int s = 0; s < opt.refinement_steps; ++s) X += lu.solve(B - A * X);
        residual = (B - A * X).cwiseAbs().maxCoeff();
    }

    std::vector<Mat2> mu(N);
    for (std::size_t j = 0; j < N; ++j)
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) mu[j](r, c) = X(Eigen::Index(2 * j + c), r);
    return RHSolution(mesh, std::move(vmI), std::move(mu), rcond, residual);
}

}  // namespace rhpw
