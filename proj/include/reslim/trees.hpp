#pragma once

#include <cstddef>
#include <vector>

#include "reslim/entropy.hpp"
#include "reslim/gh.hpp"
#include "reslim/metric_core.hpp"
#include "reslim/resistance.hpp"
#include "reslim/rng.hpp"

namespace reslim {

/// Ordered rooted tree. Children keep the order given at construction
/// (index order when built from a parent array).
class PlaneTree {
public:
    PlaneTree() : PlaneTree(std::vector<long>{-1}) {}
    explicit PlaneTree(std::vector<long> parent);
    PlaneTree(std::vector<long> parent, std::vector<std::vector<std::size_t>> children);

    std::size_t size() const { return parent_.size(); }
    std::size_t root() const { return root_; }
    const std::vector<long>& parent() const { return parent_; }
    const std::vector<std::vector<std::size_t>>& children() const { return children_; }

    std::vector<std::size_t> depths() const;
    /// Depth-first order, children visited in their stored order.
    std::vector<std::size_t> preorder() const;
    /// Same tree relabelled in depth-first order.
    PlaneTree canonical() const;
    /// Graph distances from one node.
    std::vector<std::size_t> distances_from(std::size_t x) const;
    FiniteMetricSpace graph_metric(double scale = 1.0) const;
    /// (tree, a d, root, b counting measure).
    RootedMeasuredSpace measured(double a, double b) const;

    bool operator==(const PlaneTree& o) const { return parent_ == o.parent_ && children_ == o.children_; }

private:
    std::vector<long> parent_;
    std::vector<std::vector<std::size_t>> children_;
    std::size_t root_ = 0;
};

/// Grid samples f(k h), k = 0..K, of a piecewise-linear excursion.
struct ExcursionFunction {
    double h = 1.0;
    std::vector<double> values;

    /// sup{t : f(t) > 0} for the interpolant; 0 for the zero function.
    double support_end() const;
    void validate() const;
    /// max_k |f((k+1)h) - f(kh)|: modulus of the interpolant over one cell.
    double oscillation() const;
    double sup_norm() const;
    /// Resample on a finer grid of step h/m by linear interpolation.
    ExcursionFunction refine(std::size_t m) const;
};

struct ContourHeight {
    ExcursionFunction contour;         // step 1 on [0, 2n]
    std::vector<double> height;        // depth of the k-th node in depth-first order
    std::vector<std::size_t> walk;     // f_tau(i): node visited at time i, i = 0..2n
};

ContourHeight contour_and_height(const PlaneTree& t);

/// Decodes a contour sequence (integer steps +-1, starting and ending at 0).
PlaneTree tree_from_contour(const std::vector<double>& contour);

/// Finite real tree from grid times: pseudo-distance
/// f(s) + f(t) - 2 min_{[s,t]} f, quotient by zero distance, metric a d,
/// mass b h per grid cell (cell [kh, (k+1)h) to the class of kh).
struct CodedRealTree {
    RootedMeasuredSpace space;
    std::vector<std::size_t> class_of;  // grid index -> point (indices 0..sigma/h)
};

CodedRealTree code_real_tree(const ExcursionFunction& f, double a = 1.0, double b = 1.0);

struct TreeBound {
    GhpBound computed;
    double paper_bound = 0.0;
    double slack = 0.0;
    bool pass = false;
};

/// GHP bound between (tau, a d, rho, b count) and the contour-coded tree with
/// metric a d and measure (b/2) Leb, via the correspondence pairing the child
/// end of the traversed edge with the contour point. grid_step must divide 2n.
TreeBound ghp_tree_bounds(const PlaneTree& t, double a, double b, double grid_step = 0.5);

/// GHP bound between the trees coded by f and g (same grid step) via the
/// time-matching correspondence, against 6 ||f-g|| + |sigma_f - sigma_g|.
TreeBound ghp_excursion_bounds(const ExcursionFunction& f, const ExcursionFunction& g);

/// Offspring law Geometric(q) on {0, 1, ...}: p(k) = q (1-q)^k, truncated at kmax.
std::vector<double> geometric_offspring(double q = 0.5, std::size_t kmax = 64);

/// Galton-Watson tree conditioned on n+1 nodes (Lukasiewicz path + cycle lemma).
PlaneTree gw_tree_conditioned(const std::vector<double>& offspring, std::size_t n, Rng& rng,
                              std::size_t max_attempts = 100000);

/// Normalized excursion on [0,1] from a Gaussian bridge and Vervaat rotation.
ExcursionFunction brownian_excursion(std::size_t grid_points, Rng& rng);

/// v(u) for integer radii u = 0..diameter with counting measure.
VolumeProfile tree_volume_profile(const PlaneTree& t);

struct VolumeCheck {
    bool pass = false;
    double best_constant = 0.0;  // largest C with v(n r / B_n)/n >= C r^{1/gamma} whenever below 1
};

/// inf_x m(D(x, n r / B_n)) / n >= (C r^{1/gamma}) ^ 1 for all r in the grid.
VolumeCheck volume_check_gw(const PlaneTree& t, double gamma, double c, double b_n, const std::vector<double>& r_grid);

/// Distinct nodes among f_tau(t), t in [m1, m1 + 2 m2], built from down-steps
/// before the window minimum and up-steps after it. Throws if fewer than m2.
std::vector<std::size_t> window_nodes(const ContourHeight& ch, std::size_t m1, std::size_t m2);

/// Uniform spanning tree by loop-erased random walks, rooted at root.
PlaneTree wilson_ust(const ResistanceNetwork& graph, Rng& rng, std::size_t root = 0);

}  // namespace reslim
