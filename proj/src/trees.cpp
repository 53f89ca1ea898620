#include "reslim/trees.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

namespace reslim {

namespace {

std::vector<std::vector<std::size_t>> children_by_index(const std::vector<long>& parent) {
    std::vector<std::vector<std::size_t>> ch(parent.size());
    for (std::size_t v = 0; v < parent.size(); ++v)
        if (parent[v] >= 0) {
            if (std::size_t(parent[v]) >= parent.size()) throw Error("parent index out of range");
            ch[std::size_t(parent[v])].push_back(v);
        }
    return ch;
}

}  // namespace

PlaneTree::PlaneTree(std::vector<long> parent) : PlaneTree(parent, children_by_index(parent)) {}

PlaneTree::PlaneTree(std::vector<long> parent, std::vector<std::vector<std::size_t>> children)
    : parent_(std::move(parent)), children_(std::move(children)) {
    const std::size_t n = parent_.size();
    if (n == 0) throw Error("a tree needs at least one node");
    if (children_.size() != n) throw Error("children lists do not match the parent array");
    std::size_t roots = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (parent_[v] < 0) {
            ++roots;
            root_ = v;
        } else if (std::size_t(parent_[v]) >= n) {
            throw Error("parent index out of range");
        }
    }
    if (roots != 1) throw Error("tree must have exactly one root");
    std::vector<std::size_t> count(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (auto c : children_[v]) {
            if (c >= n || parent_[c] != long(v)) throw Error("children lists disagree with parents");
            ++count[c];
        }
    for (std::size_t v = 0; v < n; ++v)
        if (v != root_ && count[v] != 1) throw Error("children lists disagree with parents");
    if (preorder().size() != n) throw Error("parent array contains a cycle");
}

std::vector<std::size_t> PlaneTree::preorder() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    std::vector<std::size_t> stack{root_};
    while (!stack.empty() && out.size() <= size()) {
        auto v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (auto it = children_[v].rbegin(); it != children_[v].rend(); ++it) stack.push_back(*it);
    }
    return out;
}

std::vector<std::size_t> PlaneTree::depths() const {
    std::vector<std::size_t> d(size(), 0);
    for (auto v : preorder())
        for (auto c : children_[v]) d[c] = d[v] + 1;
    return d;
}

PlaneTree PlaneTree::canonical() const {
    auto order = preorder();
    std::vector<std::size_t> label(size());
    for (std::size_t i = 0; i < order.size(); ++i) label[order[i]] = i;
    std::vector<long> parent(size(), -1);
    std::vector<std::vector<std::size_t>> ch(size());
    for (std::size_t v = 0; v < size(); ++v) {
        if (parent_[v] >= 0) parent[label[v]] = long(label[std::size_t(parent_[v])]);
        for (auto c : children_[v]) ch[label[v]].push_back(label[c]);
    }
    return PlaneTree(std::move(parent), std::move(ch));
}

std::vector<std::size_t> PlaneTree::distances_from(std::size_t x) const {
    const std::size_t n = size();
    if (x >= n) throw Error("node index out of range");
    std::vector<std::size_t> d(n, std::numeric_limits<std::size_t>::max());
    std::deque<std::size_t> q{x};
    d[x] = 0;
    while (!q.empty()) {
        auto v = q.front();
        q.pop_front();
        auto visit = [&](std::size_t w) {
            if (d[w] == std::numeric_limits<std::size_t>::max()) {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
        };
        if (parent_[v] >= 0) visit(std::size_t(parent_[v]));
        for (auto c : children_[v]) visit(c);
    }
    return d;
}

FiniteMetricSpace PlaneTree::graph_metric(double scale) const {
    if (!(scale > 0.0)) throw Error("distance scale must be positive");
    const std::size_t n = size();
    std::vector<double> flat(n * n);
    for (std::size_t x = 0; x < n; ++x) {
        auto d = distances_from(x);
        for (std::size_t y = 0; y < n; ++y) flat[x * n + y] = scale * double(d[y]);
    }
    return FiniteMetricSpace::trusted(n, std::move(flat));
}

RootedMeasuredSpace PlaneTree::measured(double a, double b) const {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("tree scalings must be positive");
    return RootedMeasuredSpace(graph_metric(a), root_, std::vector<double>(size(), b));
}

double ExcursionFunction::support_end() const {
    for (std::size_t k = values.size(); k-- > 0;)
        if (values[k] > 0.0) return double(k + 1) * h;
    return 0.0;
}

void ExcursionFunction::validate() const {
    if (!(h > 0.0)) throw Error("grid step must be positive");
    if (values.empty()) throw Error("excursion has no samples");
    if (values.front() != 0.0) throw Error("excursion must start at 0");
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw Error("excursion values must be finite and nonnegative");
}

double ExcursionFunction::oscillation() const {
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < values.size(); ++k) m = std::max(m, std::abs(values[k + 1] - values[k]));
    return m;
}

double ExcursionFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

ExcursionFunction ExcursionFunction::refine(std::size_t m) const {
    if (m == 0) throw Error("refinement factor must be positive");
    ExcursionFunction out;
    out.h = h / double(m);
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
        for (std::size_t j = 0; j < m; ++j)
            out.values.push_back(values[k] + (values[k + 1] - values[k]) * double(j) / double(m));
    out.values.push_back(values.back());
    return out;
}

ContourHeight contour_and_height(const PlaneTree& t) {
    ContourHeight ch;
    ch.contour.h = 1.0;
    const auto& kids = t.children();
    // Iterative depth-first walk recording every visit.
    std::vector<std::pair<std::size_t, std::size_t>> stack{{t.root(), 0}};
    ch.walk.push_back(t.root());
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        if (next < kids[v].size()) {
            auto c = kids[v][next++];
            stack.push_back({c, 0});
            ch.walk.push_back(c);
        } else {
            stack.pop_back();
            if (!stack.empty()) ch.walk.push_back(stack.back().first);
        }
    }
    auto depth = t.depths();
    for (auto v : ch.walk) ch.contour.values.push_back(double(depth[v]));
    for (auto v : t.preorder()) ch.height.push_back(double(depth[v]));
    return ch;
}

PlaneTree tree_from_contour(const std::vector<double>& contour) {
    if (contour.empty() || contour.front() != 0.0 || contour.back() != 0.0)
        throw Error("contour must start and end at 0");
    if (contour.size() % 2 == 0) throw Error("contour of a tree has odd length");
    std::vector<long> parent{-1};
    std::vector<std::size_t> path{0};
    for (std::size_t i = 1; i < contour.size(); ++i) {
        double step = contour[i] - contour[i - 1];
        if (step == 1.0) {
            parent.push_back(long(path.back()));
            path.push_back(parent.size() - 1);
        } else if (step == -1.0 && path.size() > 1) {
            path.pop_back();
        } else {
            throw Error("contour steps must be +-1 and stay nonnegative");
        }
    }
    return PlaneTree(std::move(parent));
}

CodedRealTree code_real_tree(const ExcursionFunction& f, double a, double b) {
    f.validate();
    if (!(a > 0.0) || !(b > 0.0)) throw Error("tree scalings must be positive");
    const double sigma = f.support_end();
    if (!(sigma > 0.0)) throw Error("excursion has empty support");
    const std::size_t K = std::min(f.values.size() - 1, std::size_t(std::llround(sigma / f.h)));
    const double* v = f.values.data();
    const double tol = 1e-12 * std::max(1.0, f.sup_norm());

    // Zero pseudo-distance: f(i) = f(j) = min over [i, j]; the sweep stops once
    // the running minimum drops below f(i).
    std::vector<std::size_t> rep(K + 1);
    std::iota(rep.begin(), rep.end(), 0);
    for (std::size_t i = 0; i <= K; ++i) {
        if (rep[i] != i) continue;
        for (std::size_t j = i + 1; j <= K; ++j) {
            if (v[j] < v[i] - tol) break;
            if (v[j] <= v[i] + tol) rep[j] = i;
        }
    }
    CodedRealTree out;
    out.class_of.assign(K + 1, 0);
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i <= K; ++i) {
        if (rep[i] == i) {
            out.class_of[i] = reps.size();
            reps.push_back(i);
        } else {
            out.class_of[i] = out.class_of[rep[i]];
        }
    }
    const std::size_t m = reps.size();
    std::vector<double> flat(m * m, 0.0);
    for (std::size_t p = 0; p < m; ++p) {
        const std::size_t i = reps[p];
        double run = v[i];
        std::size_t q = p + 1;
        for (std::size_t j = i + 1; j <= K && q < m; ++j) {
            run = std::min(run, v[j]);
            if (j == reps[q]) {
                double d = a * std::max(0.0, v[i] + v[j] - 2.0 * run);
                flat[p * m + q] = flat[q * m + p] = d;
                ++q;
            }
        }
    }
    std::vector<double> w(m, 0.0);
    for (std::size_t k = 0; k < K; ++k) w[out.class_of[k]] += b * f.h;
    for (std::size_t p = 0; p < m; ++p)
        if (w[p] <= 0.0) throw NumericalError("coded tree class without mass");
    out.space = RootedMeasuredSpace(FiniteMetricSpace::trusted(m, std::move(flat)), out.class_of[0], std::move(w));
    return out;
}

TreeBound ghp_tree_bounds(const PlaneTree& t, double a, double b, double grid_step) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("tree scalings must be positive");
    TreeBound out;
    out.paper_bound = 1.5 * a + b;
    const std::size_t n = t.size() - 1;
    auto x = t.measured(a, b);
    if (n == 0) {
        // The coded tree of the zero contour is a single point with no mass.
        out.computed.bound = b;
        out.computed.prohorov = b;
        out.pass = out.computed.bound <= out.paper_bound;
        return out;
    }
    auto ch = contour_and_height(t);
    const double steps = double(2 * n) / grid_step;
    const std::size_t K = std::size_t(std::llround(steps));
    if (!(grid_step > 0.0) || K == 0 || std::abs(steps - double(K)) > 1e-9 * steps)
        throw Error("grid step must divide the contour length");
    ExcursionFunction f;
    f.h = double(2 * n) / double(K);
    f.values.resize(K + 1);
    auto depth = t.depths();
    std::vector<std::size_t> node(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        const double s = double(k) * f.h;
        double fl = std::floor(s + 1e-9);
        std::size_t i = std::min(std::size_t(fl), 2 * n);
        if (std::abs(s - fl) <= 1e-9 || i == 2 * n) {
            f.values[k] = ch.contour.values[i];
            node[k] = ch.walk[i];
        } else {
            double frac = s - double(i);
            f.values[k] = ch.contour.values[i] + (ch.contour.values[i + 1] - ch.contour.values[i]) * frac;
            auto u = ch.walk[i], w = ch.walk[i + 1];
            node[k] = depth[u] > depth[w] ? u : w;
        }
    }
    f.values[K] = 0.0;
    auto coded = code_real_tree(f, a, b / 2.0);
    Correspondence c;
    for (std::size_t k = 0; k <= K; ++k) c.pairs.push_back({node[k], coded.class_of[k]});
    std::sort(c.pairs.begin(), c.pairs.end());
    c.pairs.erase(std::unique(c.pairs.begin(), c.pairs.end()), c.pairs.end());
    out.computed = ghp_upper_bound(x, coded.space, c);
    out.slack = a * f.oscillation();
    out.pass = out.computed.bound <= out.paper_bound + out.slack + 2.0 * out.computed.delta + 1e-12;
    return out;
}

TreeBound ghp_excursion_bounds(const ExcursionFunction& f, const ExcursionFunction& g) {
    f.validate();
    g.validate();
    if (std::abs(f.h - g.h) > 1e-12 * f.h) throw Error("excursions must share the grid step");
    auto cf = code_real_tree(f);
    auto cg = code_real_tree(g);
    const std::size_t kf = cf.class_of.size(), kg = cg.class_of.size();
    const std::size_t K = std::max(kf, kg);
    Correspondence c;
    for (std::size_t k = 0; k < K; ++k) {
        auto p = k < kf ? cf.class_of[k] : cf.space.root;
        auto q = k < kg ? cg.class_of[k] : cg.space.root;
        c.pairs.push_back({p, q});
    }
    std::sort(c.pairs.begin(), c.pairs.end());
    c.pairs.erase(std::unique(c.pairs.begin(), c.pairs.end()), c.pairs.end());
    double sup = 0.0;
    const std::size_t L = std::max(f.values.size(), g.values.size());
    for (std::size_t k = 0; k < L; ++k) {
        double a = k < f.values.size() ? f.values[k] : 0.0;
        double b = k < g.values.size() ? g.values[k] : 0.0;
        sup = std::max(sup, std::abs(a - b));
    }
    TreeBound out;
    out.paper_bound = 6.0 * sup + std::abs(f.support_end() - g.support_end());
    out.computed = ghp_upper_bound(cf.space, cg.space, c);
    out.slack = f.oscillation() + g.oscillation();
    out.pass = out.computed.bound <= out.paper_bound + out.slack + 2.0 * out.computed.delta + 1e-12;
    return out;
}

std::vector<double> geometric_offspring(double q, std::size_t kmax) {
    if (!(q > 0.0 && q < 1.0)) throw Error("geometric parameter must lie in (0,1)");
    std::vector<double> p(kmax + 1);
    for (std::size_t k = 0; k <= kmax; ++k) p[k] = q * std::pow(1.0 - q, double(k));
    return p;
}

PlaneTree gw_tree_conditioned(const std::vector<double>& offspring, std::size_t n, Rng& rng,
                              std::size_t max_attempts) {
    if (offspring.empty() || !(offspring[0] > 0.0)) throw Error("offspring law needs p(0) > 0");
    double total = 0.0, mean = 0.0;
    for (std::size_t k = 0; k < offspring.size(); ++k) {
        if (!(offspring[k] >= 0.0)) throw Error("offspring probabilities must be nonnegative");
        total += offspring[k];
        mean += double(k) * offspring[k];
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error("offspring probabilities must sum to 1");
    if (std::abs(mean - 1.0) > 1e-9) throw Error("offspring law must have mean 1");
    std::discrete_distribution<std::size_t> law(offspring.begin(), offspring.end());

    std::vector<std::size_t> xi(n + 1);
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        std::size_t sum = 0;
        for (auto& x : xi) {
            x = law(rng);
            sum += x;
        }
        if (sum != n) continue;
        // Cycle lemma: the walk of xi - 1 ends at -1; rotating to start right
        // after the first index of its minimum gives the unique excursion.
        long s = 0, best = 0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i <= n; ++i) {
            s += long(xi[i]) - 1;
            if (s < best) {
                best = s;
                arg = i;
            }
        }
        std::rotate(xi.begin(), xi.begin() + long(arg + 1) % long(n + 1), xi.end());
        std::vector<long> parent(n + 1, -1);
        std::vector<std::pair<std::size_t, std::size_t>> open;
        if (xi[0] > 0) open.push_back({0, xi[0]});
        for (std::size_t i = 1; i <= n; ++i) {
            if (open.empty()) throw NumericalError("Lukasiewicz path left the excursion");
            auto& top = open.back();
            parent[i] = long(top.first);
            if (--top.second == 0) open.pop_back();
            if (xi[i] > 0) open.push_back({i, xi[i]});
        }
        if (!open.empty()) throw NumericalError("Lukasiewicz path did not close");
        return PlaneTree(std::move(parent));
    }
    throw Error("could not realise a tree with " + std::to_string(n + 1) + " nodes after " +
                std::to_string(max_attempts) + " attempts");
}

ExcursionFunction brownian_excursion(std::size_t grid_points, Rng& rng) {
    if (grid_points < 2) throw Error("excursion needs at least 2 grid points");
    const std::size_t m = grid_points - 1;
    ExcursionFunction e;
    e.h = 1.0 / double(m);
    e.values.assign(grid_points, 0.0);
    if (m == 1) return e;
    std::normal_distribution<double> gauss(0.0, std::sqrt(e.h));
    std::vector<double> s(grid_points, 0.0);
    for (std::size_t k = 1; k <= m; ++k) s[k] = s[k - 1] + gauss(rng);
    for (std::size_t k = 0; k <= m; ++k) s[k] -= double(k) / double(m) * s[m];
    std::size_t arg = 0;
    for (std::size_t k = 1; k < m; ++k)
        if (s[k] < s[arg]) arg = k;
    for (std::size_t k = 0; k <= m; ++k) e.values[k] = std::max(0.0, s[(arg + k) % m] - s[arg]);
    e.values[0] = e.values[m] = 0.0;
    return e;
}

VolumeProfile tree_volume_profile(const PlaneTree& t) {
    const std::size_t n = t.size();
    std::vector<std::vector<std::size_t>> hist;
    std::size_t diam = 0;
    std::vector<double> best;
    for (std::size_t x = 0; x < n; ++x) {
        auto d = t.distances_from(x);
        std::size_t far = *std::max_element(d.begin(), d.end());
        diam = std::max(diam, far);
        std::vector<double> cum(far + 1, 0.0);
        for (auto v : d) cum[v] += 1.0;
        for (std::size_t u = 1; u <= far; ++u) cum[u] += cum[u - 1];
        if (best.size() <= far) best.resize(far + 1, std::numeric_limits<double>::infinity());
        for (std::size_t u = 0; u < best.size(); ++u) best[u] = std::min(best[u], u <= far ? cum[u] : double(n));
    }
    VolumeProfile v;
    for (std::size_t u = 0; u <= diam; ++u) {
        v.radii.push_back(double(u));
        v.values.push_back(std::min(best[u], double(n)));
    }
    return v;
}

VolumeCheck volume_check_gw(const PlaneTree& t, double gamma, double c, double b_n, const std::vector<double>& r_grid) {
    if (!(gamma > 0.0) || !(b_n > 0.0)) throw Error("gamma and B_n must be positive");
    const double n = double(t.size() - 1);
    if (n <= 0.0) throw Error("volume check needs at least one edge");
    auto v = tree_volume_profile(t);
    VolumeCheck out;
    out.pass = true;
    out.best_constant = std::numeric_limits<double>::infinity();
    for (double r : r_grid) {
        if (!(r > 0.0)) throw Error("radii must be positive");
        double radius = n * r / b_n;
        double frac = v.at(std::floor(radius + 1e-12)) / n;
        double target = std::min(c * std::pow(r, 1.0 / gamma), 1.0);
        if (frac < target) out.pass = false;
        if (frac < 1.0) out.best_constant = std::min(out.best_constant, frac / std::pow(r, 1.0 / gamma));
    }
    return out;
}

std::vector<std::size_t> window_nodes(const ContourHeight& ch, std::size_t m1, std::size_t m2) {
    const auto& c = ch.contour.values;
    const std::size_t end = m1 + 2 * m2;
    if (end >= c.size()) throw Error("window exceeds the contour");
    std::size_t m3 = m1;
    for (std::size_t t = m1; t <= end; ++t)
        if (c[t] < c[m3]) m3 = t;
    std::vector<std::size_t> nodes;
    for (std::size_t t = m1; t < m3; ++t)
        if (c[t + 1] < c[t]) nodes.push_back(ch.walk[t]);
    for (std::size_t t = m3; t < end; ++t)
        if (c[t + 1] > c[t]) nodes.push_back(ch.walk[t + 1]);
    auto sorted = nodes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw NumericalError("window construction repeated a node");
    if (nodes.size() < m2) throw NumericalError("window construction found too few nodes");
    return nodes;
}

PlaneTree wilson_ust(const ResistanceNetwork& graph, Rng& rng, std::size_t root) {
    const std::size_t n = graph.size();
    if (root >= n) throw Error("root out of range");
    const auto& adj = graph.adjacency();
    std::vector<char> in_tree(n, 0);
    std::vector<long> next(n, -1);
    in_tree[root] = 1;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t u = i;
        while (!in_tree[u]) {
            double r = unif(rng) * graph.conductance_at(u);
            std::size_t pick = adj[u].back().first;
            for (auto [w, cw] : adj[u]) {
                if (r < cw) {
                    pick = w;
                    break;
                }
                r -= cw;
            }
            next[u] = long(pick);
            u = pick;
        }
        for (u = i; !in_tree[u]; u = std::size_t(next[u])) in_tree[u] = 1;
    }
    return PlaneTree(std::move(next));
}

}  // namespace reslim
