#include "reslim/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace reslim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double eval_curve(const Curve& c, double t) {
    if (c.empty()) throw Error("empty curve");
    if (t <= c.front().first) return c.front().second;
    if (t >= c.back().first) return c.back().second;
    auto it = std::upper_bound(c.begin(), c.end(), t,
                               [](double v, const std::pair<double, double>& k) { return v < k.first; });
    const auto& b = *it;
    const auto& a = *std::prev(it);
    if (b.first == a.first) return b.second;
    return a.second + (b.second - a.second) * (t - a.first) / (b.first - a.first);
}

/// Alive part of a path on [0, tau): times[0] = 0 and jump times below tau.
struct Skeleton {
    std::vector<double> times;
    std::vector<std::size_t> states;
    double tau = 0.0;
};

Skeleton skeleton(const KilledPath& p, double tau) {
    Skeleton s;
    s.tau = tau;
    for (const auto& e : p.events)
        if (e.t < tau) {
            s.times.push_back(e.t);
            s.states.push_back(e.state);
        }
    return s;
}

class Aligner {
public:
    Aligner(const Skeleton& x, const Skeleton& y, double norm_factor, const FiniteMetricSpace& z)
        : x_(x), y_(y), nf_(norm_factor), z_(z) {}

    double solve(std::size_t budget) {
        const std::size_t p = x_.times.size() - 1, q = y_.times.size() - 1;
        const std::size_t cells = (p + 1) * (q + 1);
        std::size_t w = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(double(budget) / double(cells))));
        w = std::min(w, std::max(p, q) + 1);
        std::vector<double> best(cells, kInf);
        best[0] = 0.0;
        double end = kInf;
        for (std::size_t a = 0; a <= p; ++a)
            for (std::size_t b = 0; b <= q; ++b) {
                const double cur = best[a * (q + 1) + b];
                if (!(cur < end)) continue;
                end = std::min(end, std::max(cur, cost(a, b, p + 1, q + 1)));
                for (std::size_t a2 = a + 1; a2 <= std::min(p, a + w); ++a2)
                    for (std::size_t b2 = b + 1; b2 <= std::min(q, b + w); ++b2) {
                        double& target = best[a2 * (q + 1) + b2];
                        if (!(cur < target)) continue;
                        target = std::min(target, std::max(cur, cost(a, b, a2, b2)));
                    }
            }
        return end;
    }

private:
    double xt(std::size_t a) const { return a < x_.times.size() ? x_.times[a] : x_.tau; }
    double yt(std::size_t b) const { return b < y_.times.size() ? y_.times[b] : y_.tau; }

    double cost(std::size_t a, std::size_t b, std::size_t a2, std::size_t b2) const {
        const double sx = xt(a), ex = xt(a2), sy = yt(b), ey = yt(b2);
        if (!(ex > sx) || !(ey > sy)) return kInf;
        const double slope = (ey - sy) / (ex - sx);
        double c = nf_ * std::abs(std::log(slope));
        std::size_t ia = a, ib = b;
        c = std::max(c, z_(x_.states[ia], y_.states[ib]));
        std::size_t na = a + 1, nb = b + 1;
        while (na < a2 || nb < b2) {
            const double tx = na < a2 ? x_.times[na] : kInf;
            const double ty = nb < b2 ? sx + (y_.times[nb] - sy) / slope : kInf;
            if (tx <= ty) ia = na++;
            if (ty <= tx) ib = nb++;
            c = std::max(c, z_(x_.states[ia], y_.states[ib]));
        }
        return c;
    }

    const Skeleton& x_;
    const Skeleton& y_;
    double nf_;
    const FiniteMetricSpace& z_;
};

void check_states(const KilledPath& p, const FiniteMetricSpace& z) {
    for (const auto& e : p.events)
        if (e.state >= z.size()) throw Error("path state outside the ambient space");
}

}  // namespace

TimeChange::TimeChange(std::vector<std::pair<double, double>> knots, double tail_slope)
    : knots_(std::move(knots)), tail_(tail_slope) {
    if (knots_.empty() || knots_.front().first != 0.0 || knots_.front().second != 0.0)
        throw Error("time change must start at (0, 0)");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i].first > knots_[i - 1].first) || !(knots_[i].second > knots_[i - 1].second))
            throw Error("time change must have positive slopes");
    if (!(tail_ > 0.0)) throw Error("time change must have positive slopes");
}

double TimeChange::operator()(double s) const {
    if (s < 0.0) throw Error("negative time");
    const auto& last = knots_.back();
    if (s >= last.first) return last.second + tail_ * (s - last.first);
    return eval_curve(knots_, s);
}

double lambda_dag_norm(const TimeChange& lambda, double t) {
    if (!(t > 0.0)) throw Error("norm horizon must be positive");
    const auto& k = lambda.knots();
    double sup = 0.0;
    for (std::size_t i = 0; i + 1 < k.size() && k[i].first < t; ++i)
        sup = std::max(sup, std::abs(std::log((k[i + 1].second - k[i].second) / (k[i + 1].first - k[i].first))));
    if (k.back().first < t) sup = std::max(sup, std::abs(std::log(lambda.tail_slope())));
    return 2.0 * std::max(t, 1.0) * sup;
}

double sup_displacement(const TimeChange& lambda, double t) {
    double d = std::abs(lambda(t) - t);
    for (const auto& [s, v] : lambda.knots())
        if (s <= t) d = std::max(d, std::abs(v - s));
    return d;
}

ExtReal a_epsilon(const KilledPath& x, const KilledPath& y, double eps, const FiniteMetricSpace& z,
                  std::size_t budget) {
    if (!(eps > 0.0 && eps < 0.5)) throw Error("epsilon must lie in (0, 1/2)");
    check_states(x, z);
    check_states(y, z);
    const double k = 1.0 / eps, h = eps + 1.0 / eps;
    const double tau_x = std::min(k, x.kill_time.as_double());
    const double norm_factor = 2.0 * std::max(h, 1.0);

    std::set<double> taus;
    for (int i = 0; i <= 8; ++i) taus.insert(std::min(k - eps + 2.0 * eps * i / 8.0, y.kill_time.as_double()));
    if (std::abs(tau_x - k) <= eps && tau_x <= y.kill_time.as_double()) taus.insert(tau_x);

    ExtReal best = ExtReal::infinity();
    const auto sx = skeleton(x, tau_x);
    for (double tau_y : taus) {
        if (tau_x == 0.0 || tau_y == 0.0) {
            if (tau_x == 0.0 && tau_y == 0.0) return 0.0;
            continue;
        }
        const auto sy = skeleton(y, tau_y);
        if (sx.times.empty() || sy.times.empty()) continue;
        double v = Aligner(sx, sy, norm_factor, z).solve(budget);
        if (std::isfinite(v)) best = min(best, ExtReal(v));
    }
    return best;
}

double j1prime_distance(const KilledPath& x, const KilledPath& y, const FiniteMetricSpace& z, double tol,
                        std::size_t budget) {
    auto ok = [&](double eps) {
        ExtReal a = max(a_epsilon(x, y, eps, z, budget), a_epsilon(y, x, eps, z, budget));
        return a < ExtReal(eps / 2.0);
    };
    auto same = [](const KilledPath& p, const KilledPath& q) {
        if (p.events.size() != q.events.size() || !(p.kill_time == q.kill_time) || p.horizon != q.horizon) return false;
        for (std::size_t i = 0; i < p.events.size(); ++i)
            if (p.events[i].t != q.events[i].t || p.events[i].state != q.events[i].state) return false;
        return true;
    };
    if (same(x, y)) return 0.0;
    const int steps = 64;
    double lo = 0.0, hi = -1.0;
    for (int i = 1; i < steps; ++i) {
        double e = 0.5 * i / steps;
        if (ok(e)) {
            hi = e;
            break;
        }
        lo = e;
    }
    if (hi < 0.0) return 0.5;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

Curve GridFunction::curve() const {
    if (!(h > 0.0)) throw Error("grid step must be positive");
    if (values.empty()) throw Error("grid function needs values");
    Curve c;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw Error("grid function values must be finite");
        c.emplace_back(i * h, values[i]);
    }
    return c;
}

Interval d_U(const Curve& f, const Curve& g, int n_max) {
    if (f.empty() || g.empty()) throw Error("empty curve");
    if (f == g) return {0.0, 0.0};
    if (n_max < 0) n_max = static_cast<int>(std::floor(std::min(f.back().first, g.back().first) + 1e-12));
    std::vector<double> ts;
    for (const auto& k : f)
        if (k.first <= n_max) ts.push_back(k.first);
    for (const auto& k : g)
        if (k.first <= n_max) ts.push_back(k.first);
    for (int n = 0; n <= n_max; ++n) ts.push_back(n);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    double running = 0.0, sum = 0.0;
    int next = 1;
    for (double t : ts) {
        running = std::max(running, std::min(1.0, std::abs(eval_curve(f, t) - eval_curve(g, t))));
        while (next <= n_max && t >= next) {
            if (t == next) sum += std::ldexp(running, -next);
            ++next;
        }
    }
    const double tail = std::ldexp(1.0, -n_max);
    return {sum + tail * running, sum + tail};
}

Interval d_U(const GridFunction& f, const GridFunction& g) { return d_U(f.curve(), g.curve()); }

ExtReal d_HL(const LocalTimeGraph& a, const LocalTimeGraph& b, const FiniteMetricSpace& z, int n_max) {
    if (a.points.size() != a.curves.size() || b.points.size() != b.curves.size())
        throw Error("one curve per graph point required");
    if (a.points.empty() && b.points.empty()) return 0.0;
    if (a.points.empty() || b.points.empty()) return ExtReal::infinity();
    std::vector<double> cross(a.points.size() * b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
        for (std::size_t j = 0; j < b.points.size(); ++j)
            cross[i * b.points.size() + j] =
                std::max(z(a.points[i], b.points[j]), d_U(a.curves[i], b.curves[j], n_max).upper);
    return hausdorff_from_cross(a.points.size(), b.points.size(), cross);
}

ExtReal d_HL(const LocalTimeGraph& a, const LocalTimeGraph& b, const FiniteMetricSpace& z, const Correspondence& c,
             int n_max) {
    if (a.points.empty() != b.points.empty()) return ExtReal::infinity();
    c.validate(a.points.size(), b.points.size());
    double v = 0.0;
    for (auto [i, j] : c.pairs)
        v = std::max({v, z(a.points[i], b.points[j]), d_U(a.curves[i], b.curves[j], n_max).upper});
    return v;
}

ProcessSystem make_process_system(const ResistanceNetwork& net, std::size_t root, const KilledPath& path,
                                  int n_max) {
    if (n_max < 1) throw Error("local-time range must be at least 1");
    ProcessSystem s;
    s.space = RootedMeasuredSpace(net.resistance_metric(), root, net.mu());
    s.path = path;
    s.n_max = n_max;
    LocalTimeField lt(path, net.mu());
    for (std::size_t x = 0; x < net.size(); ++x) s.local_time.push_back(lt.curve(x, n_max));
    return s;
}

DcResult d_Dc(const ProcessSystem& a, const ProcessSystem& b, const Correspondence& c, double delta,
              std::size_t budget) {
    const std::size_t na = a.space.size(), nb = b.space.size();
    if (a.local_time.size() != na || b.local_time.size() != nb) throw Error("one local-time curve per point required");
    auto g = glue(a.space.space, b.space.space, c, delta);
    auto z = g.materialize(a.space.space, b.space.space);
    DcResult r;
    r.root = g(a.space.root, b.space.root);
    r.prohorov = prohorov_from_cross(a.space.weights, b.space.weights, g.cross);
    KilledPath pb = b.path;
    for (auto& e : pb.events) e.state += na;
    r.j1prime = j1prime_distance(a.path, pb, z, 1e-9, budget);
    int n_max = -1;
    if (a.n_max > 0 && b.n_max > 0) n_max = std::min(a.n_max, b.n_max);
    for (auto [x, y] : c.pairs)
        r.local_time = std::max({r.local_time, g(x, y), d_U(a.local_time[x], b.local_time[y], n_max).upper});
    r.value = std::max({r.root, r.prohorov, r.j1prime, r.local_time});
    return r;
}

namespace {

struct Restricted {
    ProcessSystem sys;
    std::vector<long> pos;  // original index -> restricted index or -1
};

Restricted restrict_system(const ProcessSystem& s, double r_incl) {
    Restricted out;
    const auto& sp = s.space;
    out.pos.assign(sp.size(), -1);
    std::vector<std::size_t> idx;
    for (std::size_t x = 0; x < sp.size(); ++x)
        if (x == sp.root || sp.space(sp.root, x) <= r_incl) {
            out.pos[x] = static_cast<long>(idx.size());
            idx.push_back(x);
        }
    std::vector<double> w;
    for (auto x : idx) w.push_back(sp.weights[x]);
    out.sys.space = RootedMeasuredSpace(sp.space.subspace(idx), static_cast<std::size_t>(out.pos[sp.root]), w);
    out.sys.path = kill(s.path, exit_time(s.path, idx));
    for (auto& e : out.sys.path.events) e.state = static_cast<std::size_t>(out.pos[e.state]);
    for (auto x : idx) out.sys.local_time.push_back(s.local_time[x]);
    out.sys.n_max = s.n_max;
    return out;
}

}  // namespace

double d_D(const ProcessSystem& a, const ProcessSystem& b, const Correspondence& c, double delta,
           std::size_t budget) {
    auto full = glue(a.space.space, b.space.space, c, delta);
    std::vector<double> radii{0.0};
    for (std::size_t x = 0; x < a.space.size(); ++x) radii.push_back(a.space.space(a.space.root, x));
    for (std::size_t y = 0; y < b.space.size(); ++y) radii.push_back(b.space.space(b.space.root, y));
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

    double total = 0.0;
    for (std::size_t j = 0; j < radii.size(); ++j) {
        // On (radii[j], radii[j+1]] the open balls equal the closed balls of radius radii[j].
        const double weight =
            std::exp(-radii[j]) - (j + 1 < radii.size() ? std::exp(-radii[j + 1]) : 0.0);
        auto ra = restrict_system(a, radii[j]);
        auto rb = restrict_system(b, radii[j]);
        Correspondence rc;
        std::vector<char> ca(ra.sys.space.size(), 0), cb(rb.sys.space.size(), 0);
        for (auto [x, y] : c.pairs)
            if (ra.pos[x] >= 0 && rb.pos[y] >= 0) {
                rc.pairs.emplace_back(ra.pos[x], rb.pos[y]);
                ca[ra.pos[x]] = cb[rb.pos[y]] = 1;
            }
        for (std::size_t x = 0; x < a.space.size(); ++x)
            if (ra.pos[x] >= 0 && !ca[ra.pos[x]]) {
                std::size_t best = b.space.root;
                for (std::size_t y = 0; y < b.space.size(); ++y)
                    if (rb.pos[y] >= 0 && full(x, y) < full(x, best)) best = y;
                rc.pairs.emplace_back(ra.pos[x], rb.pos[best]);
            }
        for (std::size_t y = 0; y < b.space.size(); ++y)
            if (rb.pos[y] >= 0 && !cb[rb.pos[y]]) {
                std::size_t best = a.space.root;
                for (std::size_t x = 0; x < a.space.size(); ++x)
                    if (ra.pos[x] >= 0 && full(x, y) < full(best, y)) best = x;
                rc.pairs.emplace_back(ra.pos[best], rb.pos[y]);
            }
        auto dc = d_Dc(ra.sys, rb.sys, rc, delta, budget);
        total += weight * std::min(1.0, dc.value);
    }
    return total;
}

}  // namespace reslim
