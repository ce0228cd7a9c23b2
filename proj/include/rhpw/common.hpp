#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rhpw {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

// Which boundary value to take on a cut: from the left of the oriented
// contour (plus) or from the right (minus). For the real axis oriented
// left to right, plus is the limit from above.
enum class Side { none, plus, minus };

struct InadmissibleParameters : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SectorError : std::domain_error {
    using std::domain_error::domain_error;
};
struct BranchAmbiguity : std::domain_error {
    using std::domain_error::domain_error;
};
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Mat2 sigma3()
{
    Mat2 s;
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

}  // namespace rhpw
