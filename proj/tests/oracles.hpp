#pragma once
// Small brute-force references shared by the unit tests. Nothing here calls
// into the library beyond reading distances.
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "reslim/metric_core.hpp"
#include "reslim/rng.hpp"

namespace oracle {

inline reslim::FiniteMetricSpace point() { return reslim::FiniteMetricSpace(std::vector<std::vector<double>>{{0.0}}); }

inline std::vector<std::vector<double>> path_matrix(std::size_t n, double step = 1.0) {
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i][j] = step * std::fabs(double(i) - double(j));
    return d;
}

/// Random points in the plane, as a Euclidean metric.
inline reslim::FiniteMetricSpace plane_points(std::size_t n, reslim::Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = u(rng), y[i] = u(rng);
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i][j] = std::hypot(x[i] - x[j], y[i] - y[j]);
    return reslim::FiniteMetricSpace(d);
}

/// Smallest subset of centres whose closed eps-balls cover everything.
inline std::size_t cover(const reslim::FiniteMetricSpace& s, double eps) {
    const std::size_t n = s.size();
    std::size_t best = n;
    for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
        std::size_t k = std::size_t(__builtin_popcountll(mask));
        if (k >= best) continue;
        bool ok = true;
        for (std::size_t x = 0; x < n && ok; ++x) {
            bool hit = false;
            for (std::size_t c = 0; c < n && !hit; ++c)
                if ((mask >> c & 1) && s(x, c) <= eps) hit = true;
            ok = hit;
        }
        if (ok) best = k;
    }
    return best;
}

/// Prohorov distance by bisection on eps, every subset checked at each step.
inline double prohorov(const std::vector<double>& m1, const std::vector<double>& m2,
                       const reslim::FiniteMetricSpace& z) {
    const std::size_t n = z.size();
    auto feasible = [&](double eps) {
        for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
            double a1 = 0, a2 = 0, e1 = 0, e2 = 0;
            for (std::size_t x = 0; x < n; ++x) {
                if (mask >> x & 1) a1 += m1[x], a2 += m2[x];
                double dist = std::numeric_limits<double>::infinity();
                for (std::size_t y = 0; y < n; ++y)
                    if (mask >> y & 1) dist = std::min(dist, z(x, y));
                if (dist < eps) e1 += m1[x], e2 += m2[x];
            }
            if (a1 > e2 + eps + 1e-15 || a2 > e1 + eps + 1e-15) return false;
        }
        return true;
    };
    double lo = 0, hi = 1.0;
    for (double w : m1) hi += w;
    for (double w : m2) hi += w;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace oracle
