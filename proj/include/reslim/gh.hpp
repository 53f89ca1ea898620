#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "reslim/entropy.hpp"
#include "reslim/metric_core.hpp"

namespace reslim {

/// Disjoint union of X and Y glued along a correspondence:
/// d(x,y) = min over (a,b) in C of dX(x,a) + dis(C)/2 + delta + dY(b,y).
struct GluedSpace {
    std::size_t nx = 0, ny = 0;
    double dis = 0.0;
    double delta = 0.0;
    std::vector<double> cross;  // nx * ny, row-major, includes dis/2 + delta

    double operator()(std::size_t x, std::size_t y) const { return cross[x * ny + y]; }
    /// Full (nx+ny)-point metric space. Only sensible for small inputs.
    FiniteMetricSpace materialize(const FiniteMetricSpace& x, const FiniteMetricSpace& y) const;
};

GluedSpace glue(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const Correspondence& c, double delta);

/// Minimises, over correspondences R, the max of cost(p, q) over p, q in R
/// (p = q included). cost is indexed by pair ids x*ny + y. Requires nx*ny <= 36.
struct CorrespondenceOptimum {
    double value = 0.0;
    Correspondence best;
};
CorrespondenceOptimum minmax_correspondence(std::size_t nx, std::size_t ny,
                                            const std::function<double(IndexPair, IndexPair)>& cost);

enum class GhMode { exact, search };

struct GhSearchOptions {
    std::uint64_t seed = 1;
    std::size_t restarts = 4;
    std::size_t evaluations = 20000;  // per restart
};

struct GhResult {
    double value = 0.0;
    Correspondence correspondence;
};

GhResult gh_distance(const FiniteMetricSpace& x, const FiniteMetricSpace& y, GhMode mode = GhMode::exact,
                     const GhSearchOptions& opt = {});

struct GhpBound {
    double bound = 0.0;
    double delta = 0.0;
    double hausdorff = 0.0;
    double root = 0.0;
    double prohorov = 0.0;
    double dis = 0.0;
};

GhpBound ghp_upper_bound(const RootedMeasuredSpace& gx, const RootedMeasuredSpace& gy, const Correspondence& c,
                         double delta);

/// Minimum over delta in {1e-3, 1e-6, 1e-9}.
GhpBound ghp_upper_bound(const RootedMeasuredSpace& gx, const RootedMeasuredSpace& gy, const Correspondence& c);

struct EntropyConvergenceRow {
    double epsilon = 0.0;
    std::size_t limit_value = 0;
    std::vector<std::size_t> sequence_values;
    std::size_t liminf = 0;     // min over the last third of the sequence
    bool continuity = false;    // N(S, .) does not jump at epsilon
    bool pass = false;
};

struct EntropyConvergenceReport {
    std::vector<double> gh_to_limit;  // per sequence member
    std::vector<EntropyConvergenceRow> rows;
    bool pass = true;
};

EntropyConvergenceReport entropy_convergence_check(const std::vector<FiniteMetricSpace>& seq,
                                                   const FiniteMetricSpace& limit,
                                                   const std::vector<double>& eps_grid);

/// Metric space carrying a covariance matrix (row-major n*n).
struct CovarianceSpace {
    FiniteMetricSpace space;
    std::vector<double> sigma;

    CovarianceSpace() = default;
    CovarianceSpace(FiniteMetricSpace s, std::vector<double> cov);
    double operator()(std::size_t i, std::size_t j) const { return sigma[i * space.size() + j]; }
};

/// Metric space carrying one real value per point.
struct FunctionSpace {
    FiniteMetricSpace space;
    std::vector<double> values;
};

/// Throws unless the symmetric matrix has all eigenvalues >= -1e-9.
void check_psd(std::size_t n, const std::vector<double>& m);

/// Bound from a point correspondence C (product correspondence C x C) as the
/// gluing slack delta tends to 0.
double hcov_upper(const CovarianceSpace& a, const CovarianceSpace& b, const Correspondence& c);
double hpr_upper(const FunctionSpace& a, const FunctionSpace& b, const Correspondence& c);

/// Minimum over all correspondences; at most 5 points per side.
GhResult hcov_distance(const CovarianceSpace& a, const CovarianceSpace& b);
GhResult hpr_distance(const FunctionSpace& a, const FunctionSpace& b);

}  // namespace reslim
