#include "reslim/metric_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "maxflow.hpp"

namespace reslim {

FiniteMetricSpace::FiniteMetricSpace(const std::vector<std::vector<double>>& d) : n_(d.size()) {
    d_.reserve(n_ * n_);
    for (const auto& r : d) {
        if (r.size() != n_) throw Error("distance matrix is not square");
        d_.insert(d_.end(), r.begin(), r.end());
    }
    check_basic();
    check_triangle();
}

FiniteMetricSpace FiniteMetricSpace::from_flat(std::size_t n, std::vector<double> flat) {
    auto s = trusted(n, std::move(flat));
    s.check_triangle();
    return s;
}

FiniteMetricSpace FiniteMetricSpace::trusted(std::size_t n, std::vector<double> flat) {
    if (flat.size() != n * n) throw Error("distance matrix has wrong size");
    FiniteMetricSpace s;
    s.n_ = n;
    s.d_ = std::move(flat);
    s.check_basic();
    return s;
}

void FiniteMetricSpace::check_basic() const {
    for (std::size_t i = 0; i < n_; ++i) {
        if (d_[i * n_ + i] != 0.0) throw Error("distance matrix has nonzero diagonal");
        for (std::size_t j = i + 1; j < n_; ++j) {
            double a = d_[i * n_ + j], b = d_[j * n_ + i];
            if (!std::isfinite(a) || std::abs(a - b) > tolerance)
                throw Error("distance matrix is not symmetric at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
            if (a <= 0.0)
                throw Error("distinct points " + std::to_string(i) + "," + std::to_string(j) +
                            " at distance 0");
        }
    }
}

void FiniteMetricSpace::check_triangle() const {
    for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t i = 0; i < n_; ++i) {
            const double dik = d_[i * n_ + k];
            const double* rk = row(k);
            const double* ri = row(i);
            for (std::size_t j = 0; j < n_; ++j)
                if (ri[j] > dik + rk[j] + tolerance)
                    throw Error("triangle inequality fails for (" + std::to_string(i) + "," +
                                std::to_string(j) + ") via " + std::to_string(k));
        }
}

double FiniteMetricSpace::diameter() const {
    return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end());
}

double FiniteMetricSpace::min_positive_distance() const {
    double m = 0.0;
    for (double v : d_)
        if (v > 0.0 && (m == 0.0 || v < m)) m = v;
    return m;
}

FiniteMetricSpace FiniteMetricSpace::subspace(const std::vector<std::size_t>& idx) const {
    std::vector<double> f(idx.size() * idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) f[a * idx.size() + b] = (*this)(idx[a], idx[b]);
    return trusted(idx.size(), std::move(f));
}

FiniteMetricSpace FiniteMetricSpace::scaled(double a) const {
    if (!(a > 0.0)) throw Error("scale factor must be positive");
    auto f = d_;
    for (auto& v : f) v *= a;
    return trusted(n_, std::move(f));
}

RootedMeasuredSpace::RootedMeasuredSpace(FiniteMetricSpace s, std::size_t rho, std::vector<double> w)
    : space(std::move(s)), root(rho), weights(std::move(w)) {
    if (space.size() == 0) throw Error("rooted space needs at least one point");
    if (root >= space.size()) throw Error("root index out of range");
    if (weights.size() != space.size()) throw Error("one weight per point required");
    for (double v : weights)
        if (!(v > 0.0) || !std::isfinite(v)) throw Error("weights must be finite and strictly positive");
}

double RootedMeasuredSpace::total_mass() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void Correspondence::validate(std::size_t nx, std::size_t ny) const {
    std::vector<char> hx(nx, 0), hy(ny, 0);
    for (auto [x, y] : pairs) {
        if (x >= nx || y >= ny) throw Error("correspondence index out of range");
        hx[x] = hy[y] = 1;
    }
    for (std::size_t i = 0; i < nx; ++i)
        if (!hx[i]) throw Error("correspondence misses point " + std::to_string(i) + " of the first space");
    for (std::size_t j = 0; j < ny; ++j)
        if (!hy[j]) throw Error("correspondence misses point " + std::to_string(j) + " of the second space");
}

Correspondence Correspondence::diagonal(std::size_t n) {
    Correspondence c;
    for (std::size_t i = 0; i < n; ++i) c.pairs.emplace_back(i, i);
    return c;
}

double hausdorff_distance(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                          const FiniteMetricSpace& z) {
    if (a.empty() || b.empty()) throw Error("empty set has no Hausdorff distance");
    std::vector<double> cross(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (a[i] >= z.size() || b[j] >= z.size()) throw Error("point index out of range");
            cross[i * b.size() + j] = z(a[i], b[j]);
        }
    return hausdorff_from_cross(a.size(), b.size(), cross);
}

double hausdorff_from_cross(std::size_t na, std::size_t nb, const std::vector<double>& cross) {
    if (na == 0 || nb == 0) throw Error("empty set has no Hausdorff distance");
    double h = 0.0;
    std::vector<double> colmin(nb, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < na; ++i) {
        const double* r = cross.data() + i * nb;
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < nb; ++j) {
            m = std::min(m, r[j]);
            colmin[j] = std::min(colmin[j], r[j]);
        }
        h = std::max(h, m);
    }
    for (double v : colmin) h = std::max(h, v);
    return h;
}

namespace {

void check_weights(const std::vector<double>& mu) {
    for (double v : mu)
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error("measure weights must be finite and nonnegative");
}

}  // namespace

double prohorov_from_cross(const std::vector<double>& mu1, const std::vector<double>& mu2,
                           const std::vector<double>& cross) {
    check_weights(mu1);
    check_weights(mu2);
    const std::size_t na = mu1.size(), nb = mu2.size();
    if (cross.size() != na * nb) throw Error("cross distance block has wrong size");

    std::vector<std::size_t> sa, sb;
    for (std::size_t i = 0; i < na; ++i)
        if (mu1[i] > 0.0) sa.push_back(i);
    for (std::size_t j = 0; j < nb; ++j)
        if (mu2[j] > 0.0) sb.push_back(j);
    const double m1 = std::accumulate(mu1.begin(), mu1.end(), 0.0);
    const double m2 = std::accumulate(mu2.begin(), mu2.end(), 0.0);
    if (sa.empty() || sb.empty()) return std::max(m1, m2);

    // Deficit at threshold thr: max over A of mu1(A) - mu2(N(A)) (and the
    // reverse) equals total mass minus the max flow through pairs within thr.
    std::vector<double> thr{0.0};
    thr.reserve(sa.size() * sb.size() + 1);
    for (auto i : sa)
        for (auto j : sb) thr.push_back(cross[i * nb + j]);
    std::sort(thr.begin(), thr.end());
    thr.erase(std::unique(thr.begin(), thr.end()), thr.end());

    const double scale = std::max(m1, m2);
    const double eps = 1e-15 * scale;
    auto deficit = [&](std::size_t k) {
        const double t = thr[k];
        detail::MaxFlow g(sa.size() + sb.size() + 2);
        const std::size_t s = sa.size() + sb.size(), sink = s + 1;
        for (std::size_t a = 0; a < sa.size(); ++a) g.add_edge(s, a, mu1[sa[a]]);
        for (std::size_t b = 0; b < sb.size(); ++b) g.add_edge(sa.size() + b, sink, mu2[sb[b]]);
        for (std::size_t a = 0; a < sa.size(); ++a) {
            const double* r = cross.data() + sa[a] * nb;
            for (std::size_t b = 0; b < sb.size(); ++b)
                if (r[sb[b]] <= t) g.add_edge(a, sa.size() + b, scale * 2.0 + 1.0);
        }
        double f = g.run(s, sink, eps);
        return std::max(0.0, scale - f);
    };

    // Smallest k with deficit(k) <= thr[k]; deficit is nonincreasing in k.
    const std::size_t K = thr.size();
    std::vector<double> memo(K, -1.0);
    auto D = [&](std::size_t k) {
        if (memo[k] < 0.0) memo[k] = deficit(k);
        return memo[k];
    };
    auto ok = [&](std::size_t k) { return D(k) <= thr[k]; };

    if (!ok(K - 1)) return D(K - 1);
    std::size_t lo = 0, hi = 1;
    while (hi < K && !ok(hi - 1)) {
        lo = hi - 1;
        hi = std::min(K, hi * 2);
    }
    // ok(hi-1) holds, first feasible index lies in [lo, hi-1].
    std::size_t a = lo, b = hi - 1;
    while (a < b) {
        std::size_t mid = a + (b - a) / 2;
        if (ok(mid))
            b = mid;
        else
            a = mid + 1;
    }
    double best = thr[a];
    if (a > 0) best = std::min(best, D(a - 1));
    return best;
}

double prohorov_distance(const std::vector<double>& mu1, const std::vector<double>& mu2,
                         const FiniteMetricSpace& z) {
    if (mu1.size() != z.size() || mu2.size() != z.size()) throw Error("measure size differs from space size");
    return prohorov_from_cross(mu1, mu2, z.flat());
}

std::vector<std::size_t> ball_indices(const RootedMeasuredSpace& g, double r) {
    if (r < 0.0) throw Error("radius must be nonnegative");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (i == g.root || g.space(g.root, i) < r) idx.push_back(i);
    return idx;
}

RootedMeasuredSpace restrict_to_ball(const RootedMeasuredSpace& g, double r) {
    auto idx = ball_indices(g, r);
    std::vector<double> w;
    std::size_t root = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
        w.push_back(g.weights[idx[a]]);
        if (idx[a] == g.root) root = a;
    }
    return RootedMeasuredSpace(g.space.subspace(idx), root, std::move(w));
}

double distortion(const Correspondence& c, const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    c.validate(x.size(), y.size());
    double d = 0.0;
    for (auto [a, b] : c.pairs)
        for (auto [a2, b2] : c.pairs) d = std::max(d, std::abs(x(a, a2) - y(b, b2)));
    return d;
}

}  // namespace reslim
