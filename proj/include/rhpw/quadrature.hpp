#pragma once

#include <vector>

namespace rhpw {

struct GaussRule {
    std::vector<double> x;  // ascending nodes on [-1, 1]
    std::vector<double> w;
};

// n-point Gauss-Legendre rule, computed once per n and cached.
const GaussRule& gauss_legendre(int n);

struct Interval {
    double a;
    double b;
};

// Partition of [0, len]. Each graded end gets `levels` dyadic panels
// shrinking toward it from a quarter of the length, plus one last panel
// touching the end; the remaining middle part is split into `middle`
// uniform panels.
std::vector<Interval> graded_partition(double len, bool grade_lo, bool grade_hi, int levels, int middle);

}  // namespace rhpw
