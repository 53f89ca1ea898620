#include "reslim/gh.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "reslim/rng.hpp"

namespace reslim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class MinMaxSearch {
public:
    MinMaxSearch(std::size_t nx, std::size_t ny, const std::function<double(IndexPair, IndexPair)>& cost)
        : nx_(nx), ny_(ny), np_(nx * ny), table_(np_ * np_) {
        for (std::size_t p = 0; p < np_; ++p)
            for (std::size_t q = 0; q < np_; ++q)
                table_[p * np_ + q] = cost({p / ny_, p % ny_}, {q / ny_, q % ny_});
    }

    CorrespondenceOptimum run() {
        covered_y_.assign(ny_, 0);
        search(0, 0.0);
        CorrespondenceOptimum out;
        out.value = best_;
        for (auto p : best_pairs_) out.best.pairs.emplace_back(p / ny_, p % ny_);
        return out;
    }

private:
    double added_cost(std::size_t p, double cur) const {
        double c = std::max(cur, table_[p * np_ + p]);
        for (auto q : chosen_) {
            c = std::max(c, table_[p * np_ + q]);
            if (c >= best_) break;
        }
        return c;
    }

    bool forward_check(std::size_t slot, double cur) const {
        for (std::size_t x = slot; x < nx_; ++x) {
            double m = kInf;
            for (std::size_t y = 0; y < ny_ && m >= best_; ++y) m = std::min(m, added_cost(x * ny_ + y, cur));
            if (m >= best_) return false;
        }
        return true;
    }

    void search(std::size_t slot, double cur) {
        if (cur >= best_) return;
        if (slot == nx_ + ny_) {
            best_ = cur;
            best_pairs_ = chosen_;
            return;
        }
        if (slot >= nx_ && covered_y_[slot - nx_]) {
            search(slot + 1, cur);
            return;
        }
        if (slot < nx_ && !forward_check(slot, cur)) return;

        std::vector<std::pair<double, std::size_t>> cand;
        if (slot < nx_) {
            for (std::size_t y = 0; y < ny_; ++y) {
                std::size_t p = slot * ny_ + y;
                double c = added_cost(p, cur);
                if (c < best_) cand.emplace_back(c, p);
            }
        } else {
            std::size_t y = slot - nx_;
            for (std::size_t x = 0; x < nx_; ++x) {
                std::size_t p = x * ny_ + y;
                double c = added_cost(p, cur);
                if (c < best_) cand.emplace_back(c, p);
            }
        }
        std::sort(cand.begin(), cand.end());
        for (auto [c, p] : cand) {
            if (c >= best_) break;
            chosen_.push_back(p);
            std::size_t y = p % ny_;
            ++covered_y_[y];
            search(slot + 1, c);
            --covered_y_[y];
            chosen_.pop_back();
        }
    }

    std::size_t nx_, ny_, np_;
    std::vector<double> table_;
    std::vector<std::size_t> chosen_;
    std::vector<std::size_t> best_pairs_;
    std::vector<int> covered_y_;
    double best_ = kInf;
};

double pair_distortion(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const std::vector<IndexPair>& pairs) {
    double d = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = i + 1; j < pairs.size(); ++j)
            d = std::max(d, std::abs(x(pairs[i].first, pairs[j].first) - y(pairs[i].second, pairs[j].second)));
    return d;
}

GhResult gh_search(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const GhSearchOptions& opt) {
    const std::size_t nx = x.size(), ny = y.size();
    GhResult best;
    best.value = kInf;
    const double scale = std::max({x.diameter(), y.diameter(), 1e-12});
    for (std::size_t r = 0; r < std::max<std::size_t>(1, opt.restarts); ++r) {
        Rng rng = stream(opt.seed, r);
        std::vector<IndexPair> pairs(nx + ny);
        std::uniform_int_distribution<std::size_t> px(0, nx - 1), py(0, ny - 1), slot(0, nx + ny - 1);
        for (std::size_t i = 0; i < nx; ++i) pairs[i] = {i, py(rng)};
        for (std::size_t j = 0; j < ny; ++j) pairs[nx + j] = {px(rng), j};
        double cur = pair_distortion(x, y, pairs);
        double local_best = cur;
        auto local_pairs = pairs;
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double t0 = scale / 10.0, t1 = scale * 1e-6;
        for (std::size_t e = 0; e < opt.evaluations; ++e) {
            double temp = t0 * std::pow(t1 / t0, double(e) / double(std::max<std::size_t>(1, opt.evaluations)));
            std::size_t s = slot(rng);
            IndexPair old = pairs[s];
            if (s < nx)
                pairs[s].second = py(rng);
            else
                pairs[s].first = px(rng);
            double next = pair_distortion(x, y, pairs);
            if (next <= cur || unif(rng) < std::exp(-(next - cur) / temp)) {
                cur = next;
                if (cur < local_best) {
                    local_best = cur;
                    local_pairs = pairs;
                }
            } else {
                pairs[s] = old;
            }
        }
        if (local_best / 2.0 < best.value) {
            best.value = local_best / 2.0;
            best.correspondence.pairs = local_pairs;
        }
    }
    return best;
}

}  // namespace

FiniteMetricSpace GluedSpace::materialize(const FiniteMetricSpace& x, const FiniteMetricSpace& y) const {
    const std::size_t n = nx + ny;
    std::vector<double> f(n * n);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < nx; ++j) f[i * n + j] = x(i, j);
    for (std::size_t i = 0; i < ny; ++i)
        for (std::size_t j = 0; j < ny; ++j) f[(nx + i) * n + nx + j] = y(i, j);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) f[i * n + nx + j] = f[(nx + j) * n + i] = cross[i * ny + j];
    return FiniteMetricSpace::trusted(n, std::move(f));
}

GluedSpace glue(const FiniteMetricSpace& x, const FiniteMetricSpace& y, const Correspondence& c, double delta) {
    if (!(delta > 0.0)) throw Error("gluing slack delta must be positive");
    c.validate(x.size(), y.size());
    GluedSpace g;
    g.nx = x.size();
    g.ny = y.size();
    g.delta = delta;
    g.dis = pair_distortion(x, y, c.pairs);
    const std::size_t nx = g.nx, ny = g.ny;
    g.cross.assign(nx * ny, kInf);

    if (nx <= ny) {
        // e(a, y) = min over partners b of a of dY(b, y); cross = min_a dX(x,a) + e(a,y).
        std::vector<double> e(nx * ny, kInf);
        for (auto [a, b] : c.pairs) {
            double* er = e.data() + a * ny;
            const double* yr = y.row(b);
            for (std::size_t j = 0; j < ny; ++j) er[j] = std::min(er[j], yr[j]);
        }
        for (std::size_t i = 0; i < nx; ++i) {
            double* out = g.cross.data() + i * ny;
            const double* xr = x.row(i);
            for (std::size_t a = 0; a < nx; ++a) {
                const double da = xr[a];
                const double* er = e.data() + a * ny;
                for (std::size_t j = 0; j < ny; ++j) out[j] = std::min(out[j], da + er[j]);
            }
        }
    } else {
        std::vector<double> e(ny * nx, kInf);  // e(b, x) = min over partners a of b of dX(a, x)
        for (auto [a, b] : c.pairs) {
            double* er = e.data() + b * nx;
            const double* xr = x.row(a);
            for (std::size_t i = 0; i < nx; ++i) er[i] = std::min(er[i], xr[i]);
        }
        std::vector<double> tmp(nx);
        for (std::size_t j = 0; j < ny; ++j) {
            std::fill(tmp.begin(), tmp.end(), kInf);
            const double* yr = y.row(j);
            for (std::size_t b = 0; b < ny; ++b) {
                const double db = yr[b];
                const double* er = e.data() + b * nx;
                for (std::size_t i = 0; i < nx; ++i) tmp[i] = std::min(tmp[i], db + er[i]);
            }
            for (std::size_t i = 0; i < nx; ++i) g.cross[i * ny + j] = tmp[i];
        }
    }
    const double shift = g.dis / 2.0 + delta;
    for (auto& v : g.cross) v += shift;
    return g;
}

CorrespondenceOptimum minmax_correspondence(std::size_t nx, std::size_t ny,
                                            const std::function<double(IndexPair, IndexPair)>& cost) {
    if (nx == 0 || ny == 0) throw Error("correspondence between empty spaces");
    if (nx * ny > 36) throw Error("exact correspondence search limited to |X|*|Y| <= 36");
    return MinMaxSearch(nx, ny, cost).run();
}

GhResult gh_distance(const FiniteMetricSpace& x, const FiniteMetricSpace& y, GhMode mode,
                     const GhSearchOptions& opt) {
    if (x.size() == 0 || y.size() == 0) throw Error("Gromov-Hausdorff distance needs nonempty spaces");
    if (mode == GhMode::search) return gh_search(x, y, opt);
    auto r = minmax_correspondence(x.size(), y.size(), [&](IndexPair p, IndexPair q) {
        return std::abs(x(p.first, q.first) - y(p.second, q.second));
    });
    return {r.value / 2.0, r.best};
}

GhpBound ghp_upper_bound(const RootedMeasuredSpace& gx, const RootedMeasuredSpace& gy, const Correspondence& c,
                         double delta) {
    auto g = glue(gx.space, gy.space, c, delta);
    GhpBound b;
    b.delta = delta;
    b.dis = g.dis;
    b.hausdorff = hausdorff_from_cross(g.nx, g.ny, g.cross);
    b.root = g(gx.root, gy.root);
    b.prohorov = prohorov_from_cross(gx.weights, gy.weights, g.cross);
    b.bound = std::max({b.hausdorff, b.root, b.prohorov});
    return b;
}

GhpBound ghp_upper_bound(const RootedMeasuredSpace& gx, const RootedMeasuredSpace& gy, const Correspondence& c) {
    // Every term is nondecreasing in delta, so the smallest grid value wins.
    return ghp_upper_bound(gx, gy, c, 1e-9);
}

EntropyConvergenceReport entropy_convergence_check(const std::vector<FiniteMetricSpace>& seq,
                                                   const FiniteMetricSpace& limit,
                                                   const std::vector<double>& eps_grid) {
    if (seq.empty()) throw Error("empty sequence");
    EntropyConvergenceReport rep;
    for (const auto& s : seq) {
        auto mode = s.size() * limit.size() <= 36 ? GhMode::exact : GhMode::search;
        rep.gh_to_limit.push_back(gh_distance(s, limit, mode).value);
    }
    std::vector<double> dists;
    for (std::size_t i = 0; i < limit.size(); ++i)
        for (std::size_t j = i + 1; j < limit.size(); ++j) dists.push_back(limit(i, j));
    std::sort(dists.begin(), dists.end());

    const std::size_t tail = (seq.size() + 2) / 3;
    for (double eps : eps_grid) {
        EntropyConvergenceRow row;
        row.epsilon = eps;
        row.limit_value = covering_number_auto(limit, eps);
        for (const auto& s : seq) row.sequence_values.push_back(covering_number_auto(s, eps));
        row.liminf = *std::min_element(row.sequence_values.end() - tail, row.sequence_values.end());

        // N(S, .) is right-continuous and only jumps at attained distances.
        std::size_t left = limit.size();
        for (double d : dists)
            if (d < eps * (1.0 - 1e-12)) left = covering_number_auto(limit, d);
        bool at_distance = std::any_of(dists.begin(), dists.end(),
                                       [eps](double d) { return std::abs(d - eps) <= 1e-12 * std::max(1.0, eps); });
        row.continuity = !(at_distance && left != row.limit_value);

        row.pass = row.limit_value <= row.liminf;
        if (row.continuity)
            row.pass = row.pass && std::all_of(row.sequence_values.end() - tail, row.sequence_values.end(),
                                               [&](std::size_t v) { return v == row.limit_value; });
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

void check_psd(std::size_t n, const std::vector<double>& m) {
    if (m.size() != n * n) throw Error("covariance matrix has wrong size");
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(m[i * n + j] - m[j * n + i]) > 1e-12 * (1.0 + std::abs(m[i * n + j])))
                throw Error("covariance matrix is not symmetric");
            a(i, j) = m[i * n + j];
        }
    if (n == 0) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) throw Error("covariance matrix is not positive semidefinite");
}

CovarianceSpace::CovarianceSpace(FiniteMetricSpace s, std::vector<double> cov)
    : space(std::move(s)), sigma(std::move(cov)) {
    check_psd(space.size(), sigma);
}

double hcov_upper(const CovarianceSpace& a, const CovarianceSpace& b, const Correspondence& c) {
    double v = distortion(c, a.space, b.space) / 2.0;
    for (auto [x1, x2] : c.pairs)
        for (auto [y1, y2] : c.pairs) v = std::max(v, std::abs(a(x1, y1) - b(x2, y2)));
    return v;
}

double hpr_upper(const FunctionSpace& a, const FunctionSpace& b, const Correspondence& c) {
    if (a.values.size() != a.space.size() || b.values.size() != b.space.size())
        throw Error("one function value per point required");
    double v = distortion(c, a.space, b.space) / 2.0;
    for (auto [x1, x2] : c.pairs) v = std::max(v, std::abs(a.values[x1] - b.values[x2]));
    return v;
}

GhResult hcov_distance(const CovarianceSpace& a, const CovarianceSpace& b) {
    if (a.space.size() > 5 || b.space.size() > 5) throw Error("exact covariance distance limited to 5 points");
    auto r = minmax_correspondence(a.space.size(), b.space.size(), [&](IndexPair p, IndexPair q) {
        return std::max(std::abs(a.space(p.first, q.first) - b.space(p.second, q.second)) / 2.0,
                        std::abs(a(p.first, q.first) - b(p.second, q.second)));
    });
    return {r.value, r.best};
}

GhResult hpr_distance(const FunctionSpace& a, const FunctionSpace& b) {
    if (a.space.size() > 5 || b.space.size() > 5) throw Error("exact function distance limited to 5 points");
    if (a.values.size() != a.space.size() || b.values.size() != b.space.size())
        throw Error("one function value per point required");
    auto r = minmax_correspondence(a.space.size(), b.space.size(), [&](IndexPair p, IndexPair q) {
        return std::max({std::abs(a.space(p.first, q.first) - b.space(p.second, q.second)) / 2.0,
                         std::abs(a.values[p.first] - b.values[p.second]),
                         std::abs(a.values[q.first] - b.values[q.second])});
    });
    return {r.value, r.best};
}

}  // namespace reslim
