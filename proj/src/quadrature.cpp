#include "rhpw/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace rhpw {

namespace {

GaussRule compute_rule(int n)
{
    GaussRule g;
    g.x.resize(n);
    g.w.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = z; p0 = 1.0; }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n == 1 ? 1.0 : n * (z * p1 - p0) / (z * z - 1.0);
        double w = 2.0 / ((1.0 - z * z) * dp * dp);
        g.x[i] = -z;
        g.x[n - 1 - i] = z;
        g.w[i] = g.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) g.x[n / 2] = 0.0;
    return g;
}

}  // namespace

const GaussRule& gauss_legendre(int n)
{
    if (n < 1 || n > 200) throw std::invalid_argument("gauss_legendre: unsupported order");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussRule>(compute_rule(n));
    return *slot;
}

std::vector<Interval> graded_partition(double len, bool grade_lo, bool grade_hi, int levels, int middle)
{
    std::vector<Interval> lo, hi, out;
    double a = 0.0, b = len;
    const double quarter = 0.25 * len;
    if (grade_lo) {
        double e = quarter;
        for (int l = 0; l < levels; ++l) {
            lo.push_back({e * 0.5, e});
            e *= 0.5;
        }
        lo.push_back({0.0, e});
        a = quarter;
    }
    if (grade_hi) {
        double e = quarter;
        for (int l = 0; l < levels; ++l) {
            hi.push_back({len - e, len - e * 0.5});
            e *= 0.5;
        }
        hi.push_back({len - e, len});
        b = len - quarter;
    }
    for (auto it = lo.rbegin(); it != lo.rend(); ++it) out.push_back(*it);
    for (int i = 0; i < middle; ++i) out.push_back({a + (b - a) * i / middle, a + (b - a) * (i + 1) / middle});
    for (auto& p : hi) out.push_back(p);
    return out;
}

}  // namespace rhpw
