#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "reslim/metric_core.hpp"

namespace reslim {

enum class CoverMode { exact, bounds };

struct CoverBounds {
    std::size_t lower = 0;
    std::size_t upper = 0;
};

/// Minimum number of closed eps-balls centred in S covering S.
/// Exact branch-and-bound, limited to 25 points.
std::size_t covering_number(const FiniteMetricSpace& s, double eps);

/// Packing lower bound and greedy upper bound. Works for any size.
CoverBounds covering_bounds(const FiniteMetricSpace& s, double eps);

/// Exact value when n <= 25, otherwise the greedy upper bound.
std::size_t covering_number_auto(const FiniteMetricSpace& s, double eps);

struct EntropyRow {
    int k;
    double epsilon;
    std::size_t n;
    double term;
};

struct EntropyProfile {
    std::vector<EntropyRow> rows;
    int k_max = 0;  // first k with N_k = |S|
};

/// N(S, 2^-k) for k = k_min .. saturation, with the tail-sum term
/// N^2 exp(-2^{alpha k}) when alpha > 0.
EntropyProfile entropy_profile(const FiniteMetricSpace& s, int k_min, double alpha, CoverMode mode);

struct TailSum {
    double value = 0.0;
    int last_k = 0;  // index of the last term added
};

/// sum_{k>=m} N(S,2^-k)^2 exp(-2^{alpha k}); truncated once a term falls below
/// 1e-16 of the partial sum after saturation.
TailSum entropy_tail_sum(const FiniteMetricSpace& s, double alpha, int m, CoverMode mode = CoverMode::exact);

/// Integral over (0,1] of sqrt(log N_{d^q}(S,r)) dr, exactly for the step function.
double dudley_integral(const FiniteMetricSpace& s, double q, CoverMode mode = CoverMode::exact);

/// v(u) = min over centers of mu(closed ball of radius u), on a grid of radii.
struct VolumeProfile {
    std::vector<double> radii;
    std::vector<double> values;

    /// Value at the nearest grid radius not exceeding u.
    double at(double u) const;
};

VolumeProfile volume_profile(const FiniteMetricSpace& s, const std::vector<double>& weights,
                             const std::vector<std::size_t>& centers, const std::vector<double>& radii);

/// total_mass / v(u/4).
double entropy_bound_from_volume(double total_mass, const VolumeProfile& v, double u);

struct ConditionIvInstance {
    FiniteMetricSpace space;  // counting measure
    std::size_t root = 0;
    double a = 1.0;           // distance scaling a_n
    double b = 1.0;           // mass scaling b_n
    double c = 1.0;           // c_{n,k}
};

struct ConditionIvReport {
    std::vector<char> pass;         // per instance
    std::vector<double> vanishing;  // b^2 exp(-c^alpha) per instance
    double pass_rate = 0.0;
};

/// Checks inf_{x in B(root, a r_k)} b^-1 mu(D(x, a u)) >= v(u) for u on a
/// log grid in (1/c, c_prime).
ConditionIvReport check_condition_iv(const std::vector<ConditionIvInstance>& seq, double r_k, double alpha_k,
                                     const std::function<double(double)>& v_k, double c_prime,
                                     std::size_t grid = 64);

}  // namespace reslim
