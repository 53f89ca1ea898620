#include "reslim/gaussian.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "reslim/constants.hpp"
#include "reslim/process.hpp"

namespace reslim {

GaussianSpec::GaussianSpec(std::size_t n, std::vector<double> sigma, std::string source)
    : n_(n), sigma_(std::move(sigma)), source_(std::move(source)) {
    if (n_ == 0) throw Error("covariance must have at least one point");
    if (sigma_.size() != n_ * n_) throw Error("covariance must be n x n");
    Eigen::MatrixXd m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            if (!std::isfinite(sigma_[i * n_ + j])) throw Error("covariance entries must be finite");
            if (std::abs(sigma_[i * n_ + j] - sigma_[j * n_ + i]) > 1e-12 * (1.0 + std::abs(sigma_[i * n_ + j])))
                throw Error("covariance must be symmetric");
            m(i, j) = sigma_[i * n_ + j];
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed");
    factor_.assign(n_ * n_, 0.0);
    for (std::size_t k = 0; k < n_; ++k) {
        double lam = es.eigenvalues()(k);
        if (lam < -1e-9) throw Error("covariance is not positive semidefinite");
        double s = std::sqrt(std::max(lam, 0.0));
        for (std::size_t i = 0; i < n_; ++i) factor_[i * n_ + k] = es.eigenvectors()(i, k) * s;
    }
    std::vector<double> flat(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            if (i != j) flat[i * n_ + j] = std::sqrt(std::max(0.0, (*this)(i, i) + (*this)(j, j) - 2.0 * (*this)(i, j)));
    metric_ = FiniteMetricSpace::from_flat(n_, std::move(flat));
}

GaussianSpec GaussianSpec::from_network(const ResistanceNetwork& net, double alpha) {
    auto u = potential_density(net, alpha);
    return GaussianSpec(u.n, u.u, "potential_density");
}

std::vector<double> GaussianSpec::apply(const std::vector<double>& z) const {
    if (z.size() != n_) throw Error("one normal per point required");
    std::vector<double> g(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) g[i] += factor_[i * n_ + k] * z[k];
    return g;
}

std::vector<double> GaussianSpec::sample(Rng& rng) const {
    std::normal_distribution<double> gauss;
    std::vector<double> z(n_);
    for (auto& v : z) v = gauss(rng);
    return apply(z);
}

std::vector<double> sample_gaussian(const GaussianSpec& spec, Rng& rng) { return spec.sample(rng); }

TailReport tail_check(double sigma, double a, std::size_t replicas, Rng& rng) {
    if (!(sigma > 0.0) || !(a >= 0.0)) throw Error("need sigma > 0 and a >= 0");
    if (replicas == 0) throw Error("at least one replica required");
    std::normal_distribution<double> gauss(0.0, sigma);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < replicas; ++i)
        if (std::abs(gauss(rng)) > a) ++hit;
    TailReport r;
    r.freq = double(hit) / double(replicas);
    r.bound = std::exp(-a * a / (2.0 * sigma * sigma));
    r.std_error = std::sqrt(r.freq * (1.0 - r.freq) / double(replicas));
    r.pass = r.freq <= r.bound + 3.0 * r.std_error;
    return r;
}

GaussianEquicontinuityReport gaussian_equicontinuity_check(const GaussianSpec& spec, double alpha, int n,
                                                           std::size_t replicas, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
    if (replicas == 0) throw Error("at least one replica required");
    const auto& d = spec.metric();
    GaussianEquicontinuityReport rep;
    rep.replicas = replicas;
    rep.threshold = constants::c_alpha_gaussian(alpha) * std::pow(2.0, -(1.0 - alpha) * n);
    rep.rhs_bound = chaining_rhs(
                        d, n, [&](double u) { return std::sqrt(2.0) * std::pow(u, 1.0 - alpha); },
                        [&](double u) { return std::exp(-std::pow(u, -2.0 * alpha)); })
                        .probability;
    const double cutoff = std::ldexp(1.0, -n + 1);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t x = 0; x < spec.size(); ++x)
        for (std::size_t y = x + 1; y < spec.size(); ++y)
            if (d(x, y) < cutoff) pairs.emplace_back(x, y);
    rep.pairs = pairs.size();
    std::size_t exceed = 0;
    if (!pairs.empty())
        for (std::size_t i = 0; i < replicas; ++i) {
            Rng rng = stream(seed, i);
            auto g = spec.sample(rng);
            double m = 0.0;
            for (auto [x, y] : pairs) m = std::max(m, std::abs(g[x] - g[y]));
            if (m > rep.threshold) ++exceed;
        }
    rep.lhs_freq = double(exceed) / double(replicas);
    rep.std_error = std::sqrt(rep.lhs_freq * (1.0 - rep.lhs_freq) / double(replicas));
    rep.pass = rep.lhs_freq <= rep.rhs_bound + 3.0 * rep.std_error;
    return rep;
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
    if (a.size() != b.size() || a.empty()) throw Error("samples must be nonempty and of equal size");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / double(a.size());
}

GaussianConvergenceReport gaussian_convergence_experiment(const std::vector<GaussianSpec>& specs,
                                                          const GaussianSpec& limit, std::size_t replicas,
                                                          std::uint64_t seed) {
    if (replicas == 0) throw Error("at least one replica required");
    const std::size_t n = limit.size();
    for (const auto& s : specs)
        if (s.size() != n) throw Error("specs must have the size of the limit");
    std::vector<std::vector<double>> z(replicas, std::vector<double>(n));
    for (std::size_t i = 0; i < replicas; ++i) {
        Rng rng = stream(seed, i);
        std::normal_distribution<double> gauss;
        for (auto& v : z[i]) v = gauss(rng);
    }
    auto functionals = [&](const GaussianSpec& s, std::vector<double>& sup, std::vector<double>& root) {
        sup.resize(replicas);
        root.resize(replicas);
        for (std::size_t i = 0; i < replicas; ++i) {
            auto g = s.apply(z[i]);
            sup[i] = *std::max_element(g.begin(), g.end());
            root[i] = g[0];
        }
    };
    std::vector<double> lim_sup, lim_root;
    functionals(limit, lim_sup, lim_root);
    GaussianConvergenceReport rep;
    const auto diag = Correspondence::diagonal(n);
    for (const auto& s : specs) {
        GaussianConvergenceRow row;
        row.hcov_gap = hcov_upper(s.covariance_space(), limit.covariance_space(), diag);
        for (std::size_t i = 0; i < n * n; ++i)
            row.covariance_gap = std::max(row.covariance_gap, std::abs(s.sigma()[i] - limit.sigma()[i]));
        std::vector<double> sup, root;
        functionals(s, sup, root);
        row.w1_sup = wasserstein1(sup, lim_sup);
        row.w1_root = wasserstein1(root, lim_root);
        rep.rows.push_back(row);
    }
    rep.hcov_decreasing = rep.w1_decreasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        rep.hcov_decreasing = rep.hcov_decreasing && rep.rows[i].hcov_gap < rep.rows[i - 1].hcov_gap;
        rep.w1_decreasing = rep.w1_decreasing && rep.rows[i].w1_sup < rep.rows[i - 1].w1_sup;
    }
    return rep;
}

}  // namespace reslim
