#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reslim/gh.hpp"
#include "reslim/metric_core.hpp"
#include "reslim/resistance.hpp"
#include "reslim/rng.hpp"

namespace reslim {

/// Mean-zero Gaussian vector with covariance sigma, carried on its own
/// metric d_G(x,y)^2 = sigma(x,x) + sigma(y,y) - 2 sigma(x,y).
class GaussianSpec {
public:
    GaussianSpec() = default;
    /// Throws if sigma has an eigenvalue below -1e-9 or d_G is degenerate.
    GaussianSpec(std::size_t n, std::vector<double> sigma, std::string source = "explicit");
    /// Covariance u_alpha of the network.
    static GaussianSpec from_network(const ResistanceNetwork& net, double alpha = 1.0);

    std::size_t size() const { return n_; }
    const std::vector<double>& sigma() const { return sigma_; }
    double operator()(std::size_t i, std::size_t j) const { return sigma_[i * n_ + j]; }
    const FiniteMetricSpace& metric() const { return metric_; }
    const std::string& source() const { return source_; }
    CovarianceSpace covariance_space() const { return CovarianceSpace(metric_, sigma_); }

    /// G = factor * z with z standard normal.
    std::vector<double> sample(Rng& rng) const;
    /// Same with caller-supplied standard normals (common random numbers).
    std::vector<double> apply(const std::vector<double>& z) const;

private:
    std::size_t n_ = 0;
    std::vector<double> sigma_;
    std::vector<double> factor_;  // row-major, V diag(sqrt(clipped lambda))
    FiniteMetricSpace metric_;
    std::string source_;
};

std::vector<double> sample_gaussian(const GaussianSpec& spec, Rng& rng);

struct TailReport {
    double freq = 0.0;
    double bound = 0.0;
    double std_error = 0.0;
    bool pass = false;
};

/// P(|xi| > a) for xi ~ N(0, sigma^2) against exp(-a^2 / (2 sigma^2)).
TailReport tail_check(double sigma, double a, std::size_t replicas, Rng& rng);

struct GaussianEquicontinuityReport {
    double threshold = 0.0;  // c_alpha 2^{-(1-alpha) n}
    double rhs_bound = 0.0;
    double lhs_freq = 0.0;
    double std_error = 0.0;
    std::size_t pairs = 0;
    std::size_t replicas = 0;
    bool pass = false;
};

/// Frequency of sup_{d_G(x,y) < 2^{-n+1}} |G(x) - G(y)| > threshold against
/// sum_{k>=n} (k+1)^2 N(F, 2^{-k})^2 exp(-2^{2 alpha (k-3)}).
GaussianEquicontinuityReport gaussian_equicontinuity_check(const GaussianSpec& spec, double alpha, int n,
                                                           std::size_t replicas, std::uint64_t seed);

struct GaussianConvergenceRow {
    double hcov_gap = 0.0;
    double covariance_gap = 0.0;  // max entry gap of the matched covariance matrices
    double w1_sup = 0.0;          // Wasserstein-1 of sup G
    double w1_root = 0.0;         // Wasserstein-1 of G at point 0
};

struct GaussianConvergenceReport {
    std::vector<GaussianConvergenceRow> rows;
    bool hcov_decreasing = false;
    bool w1_decreasing = false;
};

/// Specs of equal size matched by index. All specs are driven by the same
/// standard normals, so the functional gaps measure the covariance change.
GaussianConvergenceReport gaussian_convergence_experiment(const std::vector<GaussianSpec>& specs,
                                                          const GaussianSpec& limit, std::size_t replicas,
                                                          std::uint64_t seed);

/// Wasserstein-1 distance between two empirical samples of equal size.
double wasserstein1(std::vector<double> a, std::vector<double> b);

}  // namespace reslim
