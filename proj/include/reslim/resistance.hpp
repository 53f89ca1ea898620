#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "reslim/error.hpp"
#include "reslim/metric_core.hpp"
#include "reslim/rng.hpp"

namespace reslim {

struct NetEdge {
    std::size_t u, v;
    double c;
};

/// Connected weighted graph with conductances c and a strictly positive
/// vertex measure mu. Parallel edges are merged by adding conductances.
class ResistanceNetwork {
public:
    ResistanceNetwork() = default;
    ResistanceNetwork(std::size_t n, const std::vector<NetEdge>& edges, std::vector<double> mu);

    std::size_t size() const { return n_; }
    const std::vector<double>& mu() const { return mu_; }
    double total_mass() const;
    const std::vector<NetEdge>& edges() const { return edges_; }
    /// Neighbours with merged conductances.
    const std::vector<std::vector<std::pair<std::size_t, double>>>& adjacency() const { return adj_; }
    /// Sum of conductances at x.
    double conductance_at(std::size_t x) const { return cdeg_[x]; }
    bool is_tree() const { return edges_.size() + 1 == n_; }

    /// All-pairs resistance metric, computed once and shared by copies.
    /// Dense factorization up to 2000 vertices, path sums for trees of any size.
    const FiniteMetricSpace& resistance_metric() const;

    static constexpr std::size_t dense_limit = 2000;

private:
    struct Cache;
    std::size_t n_ = 0;
    std::vector<NetEdge> edges_;
    std::vector<double> mu_;
    std::vector<std::vector<std::pair<std::size_t, double>>> adj_;
    std::vector<double> cdeg_;
    std::shared_ptr<Cache> cache_;
};

double effective_resistance(const ResistanceNetwork& net, std::size_t x, std::size_t y);

/// Resistance by the grounded solve only (v(y) = 0), bypassing the cache and
/// the tree shortcut. Conjugate gradient beyond the dense limit.
double effective_resistance_solve(const ResistanceNetwork& net, std::size_t x, std::size_t y);

/// Sum of edge resistances along the unique path; requires a tree.
double tree_path_resistance(const ResistanceNetwork& net, std::size_t x, std::size_t y);

struct PotentialMatrix {
    double alpha = 1.0;
    std::size_t n = 0;
    std::vector<double> u;  // row-major

    double operator()(std::size_t i, std::size_t j) const { return u[i * n + j]; }
};

/// u_alpha = (L + alpha diag(mu))^{-1}; checks the reproducing identity.
PotentialMatrix potential_density(const ResistanceNetwork& net, double alpha);

/// Triples (x,y,z) with (u(x,y)-u(x,z))^2 > u(x,x) R(y,z).
std::size_t potential_inequality_violations(const PotentialMatrix& u, const FiniteMetricSpace& r);

/// d_G(x,y) = (u(x,x) + u(y,y) - 2u(x,y))^{1/2}.
FiniteMetricSpace gaussian_metric(const PotentialMatrix& u);

/// Pairs with d_G(x,y) > 2 max_z u(z,z)^{1/4} R(x,y)^{1/4}.
std::size_t quarter_power_violations(const FiniteMetricSpace& dg, const PotentialMatrix& u,
                                     const FiniteMetricSpace& r);

/// R(rho, A) for a vertex set A not containing rho; +inf for empty A.
ExtReal set_resistance(const ResistanceNetwork& net, std::size_t rho, const std::vector<std::size_t>& a);

/// R(rho, B(rho, r)^c) with B the open resistance ball.
ExtReal ball_complement_resistance(const ResistanceNetwork& net, std::size_t rho, double r);

/// E_z sigma_y for every z (0 at y), from the first-step equations.
std::vector<double> expected_hitting_times(const ResistanceNetwork& net, std::size_t y);

struct HittingStats {
    double laplace = 0.0;  // E_x exp(-sigma_y)
    double commute = 0.0;  // E_x sigma_y + E_y sigma_x
};

HittingStats hitting_statistics(const ResistanceNetwork& net, std::size_t x, std::size_t y);

ResistanceNetwork path_network(std::size_t n, double c = 1.0);
ResistanceNetwork complete_network(std::size_t n, double c = 1.0);
/// Torus Z_side^dims with unit conductances and counting measure.
ResistanceNetwork torus_network(std::size_t side, std::size_t dims);
/// Uniform random recursive tree, conductances uniform in [cmin, cmax], mu uniform in [mmin, mmax].
ResistanceNetwork random_tree_network(std::size_t n, Rng& rng, double cmin = 0.5, double cmax = 2.0,
                                      double mmin = 0.5, double mmax = 2.0);
/// Random tree plus extra edges with probability p per missing pair.
ResistanceNetwork random_network(std::size_t n, double p, Rng& rng, double cmin = 0.5, double cmax = 2.0,
                                 double mmin = 0.5, double mmax = 2.0);

}  // namespace reslim
