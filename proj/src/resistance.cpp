#include "reslim/resistance.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <queue>
#include <string>

namespace reslim {

struct ResistanceNetwork::Cache {
    std::once_flag once;
    std::optional<FiniteMetricSpace> metric;
};

namespace {

Eigen::SparseMatrix<double> laplacian(const ResistanceNetwork& net) {
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t x = 0; x < net.size(); ++x) {
        t.emplace_back(x, x, net.conductance_at(x));
        for (auto [y, c] : net.adjacency()[x]) t.emplace_back(x, y, -c);
    }
    Eigen::SparseMatrix<double> l(net.size(), net.size());
    l.setFromTriplets(t.begin(), t.end());
    return l;
}

/// Principal submatrix of L on the listed vertices, optionally + diag.
Eigen::SparseMatrix<double> sub_laplacian(const ResistanceNetwork& net, const std::vector<long>& pos,
                                          std::size_t m) {
    std::vector<Eigen::Triplet<double>> t;
    for (std::size_t x = 0; x < net.size(); ++x) {
        if (pos[x] < 0) continue;
        t.emplace_back(pos[x], pos[x], net.conductance_at(x));
        for (auto [y, c] : net.adjacency()[x])
            if (pos[y] >= 0) t.emplace_back(pos[x], pos[y], -c);
    }
    Eigen::SparseMatrix<double> l(m, m);
    l.setFromTriplets(t.begin(), t.end());
    return l;
}

std::vector<double> tree_distances_from(const ResistanceNetwork& net, std::size_t x) {
    std::vector<double> d(net.size(), -1.0);
    std::vector<std::size_t> stack{x};
    d[x] = 0.0;
    while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        for (auto [v, c] : net.adjacency()[u])
            if (d[v] < 0.0) {
                d[v] = d[u] + 1.0 / c;
                stack.push_back(v);
            }
    }
    return d;
}

}  // namespace

ResistanceNetwork::ResistanceNetwork(std::size_t n, const std::vector<NetEdge>& edges, std::vector<double> mu)
    : n_(n), mu_(std::move(mu)), adj_(n), cdeg_(n, 0.0), cache_(std::make_shared<Cache>()) {
    if (n == 0) throw Error("network needs at least one vertex");
    if (mu_.size() != n) throw Error("one measure value per vertex required");
    for (double m : mu_)
        if (!(m > 0.0) || !std::isfinite(m)) throw Error("vertex measure must be finite and strictly positive");
    std::map<std::pair<std::size_t, std::size_t>, double> merged;
    for (const auto& e : edges) {
        if (e.u >= n || e.v >= n) throw Error("edge endpoint out of range");
        if (e.u == e.v) throw Error("self-loops are not allowed");
        if (!(e.c >= 0.0) || !std::isfinite(e.c)) throw Error("conductances must be finite and nonnegative");
        if (e.c == 0.0) continue;
        merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.c;
    }
    for (auto [k, c] : merged) {
        edges_.push_back({k.first, k.second, c});
        adj_[k.first].emplace_back(k.second, c);
        adj_[k.second].emplace_back(k.first, c);
        cdeg_[k.first] += c;
        cdeg_[k.second] += c;
    }
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        for (auto [v, c] : adj_[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
    }
    if (count != n) throw Error("network is disconnected");
}

double ResistanceNetwork::total_mass() const { return std::accumulate(mu_.begin(), mu_.end(), 0.0); }

const FiniteMetricSpace& ResistanceNetwork::resistance_metric() const {
    if (!cache_) throw Error("empty network");
    std::call_once(cache_->once, [this] {
        const std::size_t n = n_;
        std::vector<double> f(n * n, 0.0);
        if (is_tree()) {
            for (std::size_t x = 0; x < n; ++x) {
                auto d = tree_distances_from(*this, x);
                std::copy(d.begin(), d.end(), f.begin() + x * n);
            }
        } else {
            if (n > dense_limit)
                throw Error("all-pairs resistance limited to " + std::to_string(dense_limit) +
                            " vertices for non-tree networks");
            // Grounded at vertex 0: G = (L without row/col 0)^{-1}.
            Eigen::MatrixXd l = Eigen::MatrixXd(laplacian(*this)).bottomRightCorner(n - 1, n - 1);
            Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
            if (n > 1) g.bottomRightCorner(n - 1, n - 1) = l.ldlt().solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y)
                    f[x * n + y] = x == y ? 0.0 : std::max(0.0, g(x, x) + g(y, y) - 2.0 * g(x, y));
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = x + 1; y < n; ++y) f[x * n + y] = f[y * n + x] = 0.5 * (f[x * n + y] + f[y * n + x]);
        }
        cache_->metric = FiniteMetricSpace::trusted(n, std::move(f));
    });
    return *cache_->metric;
}

double tree_path_resistance(const ResistanceNetwork& net, std::size_t x, std::size_t y) {
    if (!net.is_tree()) throw Error("path-sum resistance requires a tree");
    if (x >= net.size() || y >= net.size()) throw Error("vertex out of range");
    return tree_distances_from(net, x)[y];
}

double effective_resistance_solve(const ResistanceNetwork& net, std::size_t x, std::size_t y) {
    const std::size_t n = net.size();
    if (x >= n || y >= n) throw Error("vertex out of range");
    if (x == y) return 0.0;
    std::vector<long> pos(n);
    long k = 0;
    for (std::size_t v = 0; v < n; ++v) pos[v] = v == y ? -1 : k++;
    auto l = sub_laplacian(net, pos, n - 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n - 1);
    rhs(pos[x]) = 1.0;
    Eigen::VectorXd v;
    if (n <= ResistanceNetwork::dense_limit) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(l);
        if (solver.info() != Eigen::Success) throw NumericalError("grounded Laplacian factorization failed");
        v = solver.solve(rhs);
    } else {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
        cg.setTolerance(1e-10);
        cg.setMaxIterations(static_cast<Eigen::Index>(20 * n));
        cg.compute(l);
        v = cg.solve(rhs);
        if (cg.info() != Eigen::Success) throw NumericalError("conjugate gradient did not converge");
    }
    return v(pos[x]);
}

double effective_resistance(const ResistanceNetwork& net, std::size_t x, std::size_t y) {
    if (x >= net.size() || y >= net.size()) throw Error("vertex out of range");
    if (net.size() <= ResistanceNetwork::dense_limit) return net.resistance_metric()(x, y);
    if (net.is_tree()) return tree_path_resistance(net, x, y);
    return effective_resistance_solve(net, x, y);
}

PotentialMatrix potential_density(const ResistanceNetwork& net, double alpha) {
    if (!(alpha > 0.0)) throw Error("alpha must be positive");
    const std::size_t n = net.size();
    if (n > ResistanceNetwork::dense_limit) throw Error("potential density limited to 2000 vertices");
    Eigen::MatrixXd a = Eigen::MatrixXd(laplacian(net));
    for (std::size_t x = 0; x < n; ++x) a(x, x) += alpha * net.mu()[x];
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success) throw NumericalError("singular resolvent system");
    Eigen::MatrixXd u = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
    u = 0.5 * (u + u.transpose());
    double resid = (a * u - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(resid < 1e-8)) throw NumericalError("reproducing identity residual " + std::to_string(resid));
    PotentialMatrix p;
    p.alpha = alpha;
    p.n = n;
    p.u.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) p.u[i * n + j] = u(i, j);
    return p;
}

std::size_t potential_inequality_violations(const PotentialMatrix& u, const FiniteMetricSpace& r) {
    if (r.size() != u.n) throw Error("size mismatch");
    std::size_t bad = 0;
    for (std::size_t x = 0; x < u.n; ++x)
        for (std::size_t y = 0; y < u.n; ++y)
            for (std::size_t z = 0; z < u.n; ++z) {
                double lhs = u(x, y) - u(x, z);
                lhs *= lhs;
                double rhs = u(x, x) * r(y, z);
                if (lhs > rhs + 1e-12 * (1.0 + rhs)) ++bad;
            }
    return bad;
}

FiniteMetricSpace gaussian_metric(const PotentialMatrix& u) {
    const std::size_t n = u.n;
    std::vector<double> f(n * n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y) continue;
            double s = u(x, x) + u(y, y) - 2.0 * u(x, y);
            if (s < -1e-12) throw NumericalError("negative squared Gaussian distance");
            f[x * n + y] = std::sqrt(std::max(0.0, s));
        }
    if (n <= 300) return FiniteMetricSpace::from_flat(n, std::move(f));
    return FiniteMetricSpace::trusted(n, std::move(f));
}

std::size_t quarter_power_violations(const FiniteMetricSpace& dg, const PotentialMatrix& u,
                                     const FiniteMetricSpace& r) {
    double c = 0.0;
    for (std::size_t x = 0; x < u.n; ++x) c = std::max(c, std::pow(u(x, x), 0.25));
    std::size_t bad = 0;
    for (std::size_t x = 0; x < u.n; ++x)
        for (std::size_t y = 0; y < u.n; ++y) {
            double rhs = 2.0 * c * std::pow(r(x, y), 0.25);
            if (dg(x, y) > rhs + 1e-12) ++bad;
        }
    return bad;
}

ExtReal set_resistance(const ResistanceNetwork& net, std::size_t rho, const std::vector<std::size_t>& a) {
    const std::size_t n = net.size();
    if (rho >= n) throw Error("vertex out of range");
    if (a.empty()) return ExtReal::infinity();
    std::vector<long> pos(n, 0);
    for (auto v : a) {
        if (v >= n) throw Error("vertex out of range");
        if (v == rho) return 0.0;
        pos[v] = -1;
    }
    long k = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (pos[v] == 0) pos[v] = k++;
    auto l = sub_laplacian(net, pos, static_cast<std::size_t>(k));
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(l);
    if (solver.info() != Eigen::Success) throw NumericalError("Dirichlet factorization failed");
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    rhs(pos[rho]) = 1.0;
    Eigen::VectorXd v = solver.solve(rhs);
    return v(pos[rho]);
}

ExtReal ball_complement_resistance(const ResistanceNetwork& net, std::size_t rho, double r) {
    if (rho >= net.size()) throw Error("vertex out of range");
    std::vector<std::size_t> outside;
    for (std::size_t x = 0; x < net.size(); ++x)
        if (x != rho && effective_resistance(net, rho, x) >= r) outside.push_back(x);
    return set_resistance(net, rho, outside);
}

std::vector<double> expected_hitting_times(const ResistanceNetwork& net, std::size_t y) {
    const std::size_t n = net.size();
    if (y >= n) throw Error("vertex out of range");
    std::vector<double> h(n, 0.0);
    if (n == 1) return h;
    std::vector<long> pos(n);
    long k = 0;
    for (std::size_t v = 0; v < n; ++v) pos[v] = v == y ? -1 : k++;
    // (sum_w c(z,w)) h(z) - sum_w c(z,w) h(w) = mu(z), h(y) = 0.
    auto l = sub_laplacian(net, pos, n - 1);
    Eigen::VectorXd rhs(n - 1);
    for (std::size_t v = 0; v < n; ++v)
        if (pos[v] >= 0) rhs(pos[v]) = net.mu()[v];
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(l);
    if (solver.info() != Eigen::Success) throw NumericalError("hitting-time factorization failed");
    Eigen::VectorXd sol = solver.solve(rhs);
    for (std::size_t v = 0; v < n; ++v)
        if (pos[v] >= 0) h[v] = sol(pos[v]);
    return h;
}

HittingStats hitting_statistics(const ResistanceNetwork& net, std::size_t x, std::size_t y) {
    if (x >= net.size() || y >= net.size()) throw Error("vertex out of range");
    if (x == y) throw Error("hitting statistics need distinct vertices");
    HittingStats s;
    auto u = potential_density(net, 1.0);
    s.laplace = u(x, y) / u(y, y);
    s.commute = expected_hitting_times(net, y)[x] + expected_hitting_times(net, x)[y];
    double expect = effective_resistance(net, x, y) * net.total_mass();
    if (std::abs(s.commute - expect) > 1e-8 * std::max(1.0, expect))
        throw NumericalError("commute time identity violated");
    return s;
}

ResistanceNetwork path_network(std::size_t n, double c) {
    std::vector<NetEdge> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, c});
    return ResistanceNetwork(n, e, std::vector<double>(n, 1.0));
}

ResistanceNetwork complete_network(std::size_t n, double c) {
    std::vector<NetEdge> e;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) e.push_back({i, j, c});
    return ResistanceNetwork(n, e, std::vector<double>(n, 1.0));
}

ResistanceNetwork torus_network(std::size_t side, std::size_t dims) {
    if (side < 2 || dims == 0) throw Error("torus needs side >= 2 and dims >= 1");
    std::size_t n = 1;
    for (std::size_t d = 0; d < dims; ++d) n *= side;
    std::vector<NetEdge> e;
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t stride = 1;
        for (std::size_t d = 0; d < dims; ++d) {
            std::size_t coord = (v / stride) % side;
            std::size_t w = v - coord * stride + ((coord + 1) % side) * stride;
            if (side > 2 || coord == 0) e.push_back({v, w, 1.0});
            stride *= side;
        }
    }
    return ResistanceNetwork(n, e, std::vector<double>(n, 1.0));
}

ResistanceNetwork random_tree_network(std::size_t n, Rng& rng, double cmin, double cmax, double mmin, double mmax) {
    std::uniform_real_distribution<double> cd(cmin, cmax), md(mmin, mmax);
    std::vector<NetEdge> e;
    for (std::size_t i = 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::size_t p = pick(rng);
        e.push_back({p, i, cd(rng)});
    }
    std::vector<double> mu(n);
    for (auto& m : mu) m = md(rng);
    return ResistanceNetwork(n, e, std::move(mu));
}

ResistanceNetwork random_network(std::size_t n, double p, Rng& rng, double cmin, double cmax, double mmin,
                                 double mmax) {
    std::uniform_real_distribution<double> cd(cmin, cmax), md(mmin, mmax), u(0.0, 1.0);
    std::vector<NetEdge> e;
    std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
    for (std::size_t i = 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::size_t q = pick(rng);
        e.push_back({q, i, cd(rng)});
        has[q][i] = has[i][q] = 1;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!has[i][j] && u(rng) < p) e.push_back({i, j, cd(rng)});
    std::vector<double> mu(n);
    for (auto& m : mu) m = md(rng);
    return ResistanceNetwork(n, e, std::move(mu));
}

}  // namespace reslim
