#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "reslim/error.hpp"

namespace reslim {

/// Finite metric space stored as a dense row-major distance matrix.
class FiniteMetricSpace {
public:
    FiniteMetricSpace() = default;

    /// Validates symmetry, zero diagonal, positivity off the diagonal and the
    /// triangle inequality (tolerance 1e-9).
    explicit FiniteMetricSpace(const std::vector<std::vector<double>>& d);

    /// Same checks from a flat row-major matrix.
    static FiniteMetricSpace from_flat(std::size_t n, std::vector<double> flat);

    /// For metrics that hold by construction (graph, tree and coded-tree
    /// distances). Skips the cubic triangle check.
    static FiniteMetricSpace trusted(std::size_t n, std::vector<double> flat);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    const double* row(std::size_t i) const { return d_.data() + i * n_; }
    const std::vector<double>& flat() const { return d_; }

    double diameter() const;
    /// Smallest nonzero distance; 0 for a one-point space.
    double min_positive_distance() const;

    FiniteMetricSpace subspace(const std::vector<std::size_t>& idx) const;
    FiniteMetricSpace scaled(double a) const;

    static constexpr double tolerance = 1e-9;

private:
    void check_basic() const;
    void check_triangle() const;

    std::size_t n_ = 0;
    std::vector<double> d_;
};

struct RootedMeasuredSpace {
    FiniteMetricSpace space;
    std::size_t root = 0;
    std::vector<double> weights;

    RootedMeasuredSpace() = default;
    RootedMeasuredSpace(FiniteMetricSpace s, std::size_t rho, std::vector<double> w);

    std::size_t size() const { return space.size(); }
    double total_mass() const;
};

using IndexPair = std::pair<std::size_t, std::size_t>;

struct Correspondence {
    std::vector<IndexPair> pairs;

    /// Throws unless every index of both sides appears and all are in range.
    void validate(std::size_t nx, std::size_t ny) const;
    static Correspondence diagonal(std::size_t n);
};

double hausdorff_distance(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                          const FiniteMetricSpace& z);

/// Hausdorff distance between the two parts of a space given only the
/// cross block (rows: first part, cols: second part), row-major.
double hausdorff_from_cross(std::size_t na, std::size_t nb, const std::vector<double>& cross);

double prohorov_distance(const std::vector<double>& mu1, const std::vector<double>& mu2,
                         const FiniteMetricSpace& z);

/// Prohorov distance between a measure on a set A and one on a set B, where
/// cross(i,j) = d(a_i, b_j) in the ambient space (A and B disjoint in it or not;
/// only cross distances matter).
double prohorov_from_cross(const std::vector<double>& mu1, const std::vector<double>& mu2,
                           const std::vector<double>& cross);

/// Points of the closure of the open ball B(root, r) in a finite space:
/// {x : d(root,x) < r} plus the root, in increasing index order.
std::vector<std::size_t> ball_indices(const RootedMeasuredSpace& g, double r);

RootedMeasuredSpace restrict_to_ball(const RootedMeasuredSpace& g, double r);

double distortion(const Correspondence& c, const FiniteMetricSpace& x, const FiniteMetricSpace& y);

}  // namespace reslim
