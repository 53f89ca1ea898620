#pragma once

#include <cmath>

namespace reslim::constants {

// Local-time modulus threshold c_alpha sqrt(mu(F)) 2^{-(1/2-alpha) n}.
// Chaining with r(u) = 2 sqrt(2 mu(F)) u^b, b = 1/2 - alpha:
//   2 sum_{k>=n} r(2^{-k+3}) = 4 sqrt2 sqrt(mu(F)) 2^{3b} 2^{-bn} / (1 - 2^{-b}).
inline double c_alpha_local_time(double alpha) {
    const double b = 0.5 - alpha;
    return 4.0 * std::sqrt(2.0) * std::pow(2.0, 3.0 * b) / (1.0 - std::pow(2.0, -b));
}

// Gaussian modulus threshold c_alpha 2^{-(1-alpha) n}, from r(u) = sqrt2 u^{1-alpha}:
//   2 sum_{k>=n} sqrt2 2^{(1-alpha)(3-k)} = 2 sqrt2 2^{3(1-alpha)} 2^{-(1-alpha)n} / (1 - 2^{-(1-alpha)}).
inline double c_alpha_gaussian(double alpha) {
    const double b = 1.0 - alpha;
    return 2.0 * std::sqrt(2.0) * std::pow(2.0, 3.0 * b) / (1.0 - std::pow(2.0, -b));
}

// Pairwise local-time tail 2 e^T exp(-delta / (c_K R^{1/4})). With c = min_x u_1(x,x),
// 1 - u_1(x,y)/u_1(y,y) <= (R/c)^{1/2} gives gamma <= c^{-1/4} R^{1/4}, so c_K = c^{-1/4}.
inline double c_K(double min_diag_u1) { return std::pow(min_diag_u1, -0.25); }

}  // namespace reslim::constants
