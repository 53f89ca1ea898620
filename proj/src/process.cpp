#include "reslim/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "reslim/constants.hpp"
#include "reslim/entropy.hpp"

namespace reslim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<char> membership(std::size_t n, const std::vector<std::size_t>& a) {
    std::vector<char> in(n, 0);
    for (auto v : a)
        if (v < n) in[v] = 1;
    return in;
}

std::size_t max_state(const KilledPath& p) {
    std::size_t m = 0;
    for (const auto& e : p.events) m = std::max(m, e.state + 1);
    return m;
}

/// End of the i-th holding interval, clipped to the kill time and horizon.
double segment_end(const KilledPath& p, std::size_t i) {
    double end = i + 1 < p.events.size() ? p.events[i + 1].t : kInf;
    end = std::min(end, p.kill_time.as_double());
    return std::min(end, p.horizon);
}

double modulus_over_pairs(const KilledPath& path, const std::vector<double>& mu,
                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs, double T) {
    if (pairs.empty()) return 0.0;
    if (T > path.horizon) throw Error("modulus requested beyond the observed horizon");
    std::vector<double> l(mu.size(), 0.0);
    double best = 0.0;
    auto scan = [&] {
        for (auto [x, y] : pairs) best = std::max(best, std::abs(l[x] - l[y]));
    };
    for (std::size_t i = 0; i < path.events.size(); ++i) {
        const double s = path.events[i].t;
        if (s >= T) break;
        scan();
        const double e = std::min(segment_end(path, i), T);
        l[path.events[i].state] += (e - s) / mu[path.events[i].state];
    }
    scan();
    return best;
}

}  // namespace

std::size_t KilledPath::at(double t) const {
    if (t < 0.0) throw Error("negative time");
    if (!(ExtReal(t) < kill_time) || events.empty()) return kCemetery;
    auto it = std::upper_bound(events.begin(), events.end(), t,
                               [](double v, const PathEvent& e) { return v < e.t; });
    if (it == events.begin()) return kCemetery;
    return std::prev(it)->state;
}

void KilledPath::validate(std::size_t nstates) const {
    if (kill_time.is_finite() && kill_time.value() < 0.0) throw Error("negative kill time");
    if (events.empty()) {
        if (!(kill_time == ExtReal(0.0))) throw Error("path without events must be killed at time 0");
        return;
    }
    if (events.front().t != 0.0) throw Error("path must start at time 0");
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].state >= nstates) throw Error("path state " + std::to_string(events[i].state) + " out of range");
        if (i > 0 && !(events[i].t > events[i - 1].t)) throw Error("path event times must increase strictly");
        if (i > 0 && events[i].state == events[i - 1].state) throw Error("consecutive events repeat a state");
        if (!(ExtReal(events[i].t) < kill_time)) throw Error("event at or after the kill time");
    }
}

KilledPath kill(const KilledPath& x, ExtReal t) {
    if (t.is_finite() && t.value() < 0.0) throw Error("kill time must be nonnegative");
    KilledPath out;
    out.kill_time = min(x.kill_time, t);
    for (const auto& e : x.events)
        if (ExtReal(e.t) < out.kill_time) out.events.push_back(e);
    out.horizon = out.kill_time.is_finite() && out.kill_time.value() <= x.horizon ? kInf : x.horizon;
    return out;
}

KilledPath simulate_walk(const ResistanceNetwork& net, std::size_t start, double horizon, Rng& rng) {
    if (start >= net.size()) throw Error("start vertex out of range");
    if (!(horizon > 0.0)) throw Error("horizon must be positive");
    const auto& adj = net.adjacency();
    std::vector<std::vector<double>> cum(net.size());
    for (std::size_t x = 0; x < net.size(); ++x) {
        double s = 0.0;
        for (auto [y, c] : adj[x]) cum[x].push_back(s += c);
    }
    KilledPath p;
    p.horizon = horizon;
    p.events.push_back({0.0, start});
    std::size_t x = start;
    double t = 0.0;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (;;) {
        const double rate = net.conductance_at(x) / net.mu()[x];
        if (rate <= 0.0) break;
        t += std::exponential_distribution<double>(rate)(rng);
        if (t >= horizon) break;
        double u = unif(rng) * cum[x].back();
        auto k = std::upper_bound(cum[x].begin(), cum[x].end(), u) - cum[x].begin();
        k = std::min<std::ptrdiff_t>(k, static_cast<std::ptrdiff_t>(cum[x].size()) - 1);
        x = adj[x][k].first;
        p.events.push_back({t, x});
    }
    return p;
}

LocalTimeField::LocalTimeField(const KilledPath& path, const std::vector<double>& mu)
    : mu_(mu), iv_(mu.size()), before_(mu.size()) {
    path.validate(mu.size());
    horizon_ = path.kill_time.is_finite() && path.kill_time.value() <= path.horizon ? kInf : path.horizon;
    for (std::size_t i = 0; i < path.events.size(); ++i) {
        const auto x = path.events[i].state;
        const double s = path.events[i].t, e = segment_end(path, i);
        if (e > s) {
            before_[x].push_back(iv_[x].empty() ? 0.0 : before_[x].back() + (iv_[x].back().second - iv_[x].back().first));
            iv_[x].emplace_back(s, e);
        }
    }
}

double LocalTimeField::operator()(std::size_t x, double t) const {
    if (x >= mu_.size()) throw Error("vertex out of range");
    if (t < 0.0) throw Error("negative time");
    if (t > horizon_ * (1.0 + 1e-12)) throw Error("local time requested beyond the observed horizon");
    const auto& iv = iv_[x];
    auto it = std::lower_bound(iv.begin(), iv.end(), t,
                               [](const std::pair<double, double>& a, double v) { return a.first < v; });
    if (it == iv.begin()) return 0.0;
    std::size_t k = static_cast<std::size_t>(it - iv.begin()) - 1;
    return (before_[x][k] + std::min(t, iv[k].second) - iv[k].first) / mu_[x];
}

std::vector<std::pair<double, double>> LocalTimeField::curve(std::size_t x, double t_max) const {
    if (x >= mu_.size()) throw Error("vertex out of range");
    if (t_max > horizon_ * (1.0 + 1e-12)) throw Error("curve requested beyond the observed horizon");
    std::vector<std::pair<double, double>> k{{0.0, 0.0}};
    double acc = 0.0;
    for (auto [s, e] : iv_[x]) {
        if (s >= t_max) break;
        if (s > k.back().first) k.emplace_back(s, acc);
        const double end = std::min(e, t_max);
        acc += (end - s) / mu_[x];
        k.emplace_back(end, acc);
    }
    if (k.back().first < t_max) k.emplace_back(t_max, acc);
    return k;
}

LocalTimeField local_times(const KilledPath& path, const ResistanceNetwork& net) {
    return LocalTimeField(path, net.mu());
}

double occupation_integral(const KilledPath& path, const std::function<double(std::size_t)>& f, double t) {
    if (t > path.horizon) throw Error("integral requested beyond the observed horizon");
    double acc = 0.0;
    for (std::size_t i = 0; i < path.events.size(); ++i) {
        const double s = path.events[i].t;
        if (s >= t) break;
        const double e = std::min(segment_end(path, i), t);
        if (e > s) acc += f(path.events[i].state) * (e - s);
    }
    return acc;
}

double kernel_local_time(const KilledPath& path, const ResistanceNetwork& net, double delta, std::size_t x,
                         double t) {
    if (!(delta > 0.0)) throw Error("kernel width must be positive");
    if (x >= net.size()) throw Error("vertex out of range");
    path.validate(net.size());
    const auto& r = net.resistance_metric();
    auto f = [&](std::size_t y) { return std::max(0.0, delta - r(x, y)); };
    double den = 0.0;
    for (std::size_t y = 0; y < net.size(); ++y) den += f(y) * net.mu()[y];
    return occupation_integral(path, f, t) / den;
}

TraceResult trace_process(const KilledPath& path, const ResistanceNetwork& net, double r, std::size_t root) {
    if (!(r > 0.0)) throw Error("trace radius must be positive");
    path.validate(net.size());
    if (root == kCemetery) {
        if (path.events.empty()) throw Error("cannot infer the root of an empty path");
        root = path.events.front().state;
    }
    if (root >= net.size()) throw Error("root out of range");
    const auto& rm = net.resistance_metric();
    TraceResult out;
    std::vector<char> in(net.size(), 0);
    for (std::size_t x = 0; x < net.size(); ++x)
        if (x == root || rm(root, x) < r) {
            in[x] = 1;
            out.ball.push_back(x);
        }

    double clock = 0.0;
    bool unbounded = false;
    for (std::size_t i = 0; i < path.events.size(); ++i) {
        const auto x = path.events[i].state;
        if (!in[x]) continue;
        const double s = path.events[i].t, e = segment_end(path, i);
        if (out.path.events.empty() || out.path.events.back().state != x) out.path.events.push_back({clock, x});
        if (!std::isfinite(e)) {
            unbounded = true;
            break;
        }
        clock += e - s;
    }
    const bool fully_known = path.kill_time.is_finite() && path.kill_time.value() <= path.horizon;
    if (unbounded) {
        out.path.kill_time = ExtReal::infinity();
        out.path.horizon = kInf;
    } else if (fully_known || !std::isfinite(path.horizon)) {
        // The original either dies or sits outside F forever: the trace dies at A(infinity).
        out.path.kill_time = clock;
        out.path.horizon = kInf;
    } else {
        out.path.kill_time = ExtReal::infinity();
        out.path.horizon = clock;
    }
    if (out.path.kill_time.is_finite()) {
        while (!out.path.events.empty() && !(ExtReal(out.path.events.back().t) < out.path.kill_time))
            out.path.events.pop_back();
    }
    out.local_times = LocalTimeField(out.path, net.mu());
    return out;
}

ExtReal exit_time(const KilledPath& path, const std::vector<std::size_t>& a) {
    auto in = membership(std::max(max_state(path), std::size_t(1)), a);
    for (const auto& e : path.events)
        if (!in[e.state]) return e.t;
    return path.kill_time;
}

ExtReal hitting_time(const KilledPath& path, const std::vector<std::size_t>& a) {
    auto in = membership(std::max(max_state(path), std::size_t(1)), a);
    for (const auto& e : path.events)
        if (in[e.state]) return e.t;
    return ExtReal::infinity();
}

ExtReal first_return_time(const KilledPath& path, const std::vector<std::size_t>& a) {
    auto in = membership(std::max(max_state(path), std::size_t(1)), a);
    for (std::size_t i = 1; i < path.events.size(); ++i)
        if (in[path.events[i].state]) return path.events[i].t;
    return ExtReal::infinity();
}

double exit_probability_bound(const ResistanceNetwork& net, std::size_t rho, double r, double delta, double t) {
    auto rc = ball_complement_resistance(net, rho, r);
    if (rc.is_infinite()) return 0.0;
    const double big_r = rc.value();
    if (!(delta > 0.0 && delta < big_r)) throw Error("delta must lie in (0, R(rho, B^c))");
    double mass = 0.0;
    for (std::size_t x = 0; x < net.size(); ++x)
        if (x == rho || effective_resistance(net, rho, x) < delta) mass += net.mu()[x];
    return 4.0 * delta / big_r + 4.0 * t / (mass * (big_r - delta));
}

double local_time_modulus(const KilledPath& path, const ResistanceNetwork& net, double cutoff, double T) {
    const auto& r = net.resistance_metric();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t x = 0; x < net.size(); ++x)
        for (std::size_t y = x + 1; y < net.size(); ++y)
            if (r(x, y) < cutoff) pairs.emplace_back(x, y);
    return modulus_over_pairs(path, net.mu(), pairs, T);
}

ChainingRhs chaining_rhs(const FiniteMetricSpace& space, int n, const std::function<double(double)>& r_fn,
                         const std::function<double(double)>& q_fn) {
    ChainingRhs out;
    const double dmin = space.min_positive_distance();
    const double nn = double(space.size()) * double(space.size());
    for (int k = n; k < n + 4000; ++k) {
        const double eps = std::ldexp(1.0, -k);
        const double u = std::ldexp(1.0, -k + 3);
        const double rt = 2.0 * r_fn(u);
        const bool saturated = dmin == 0.0 || eps < dmin;
        const double q = q_fn(u);
        double cover = saturated || q == 0.0 ? nn : std::pow(double(covering_number_auto(space, eps)), 2.0);
        const double pt = (k + 1.0) * (k + 1.0) * cover * q;
        out.threshold += rt;
        out.probability += pt;
        out.last_k = k;
        const bool r_done = rt <= 1e-16 * out.threshold;
        const bool p_done = saturated && (pt == 0.0 || pt <= 1e-16 * out.probability);
        if (r_done && (p_done || q == 0.0) && k > n + 8) break;
    }
    return out;
}

EquicontinuityReport equicontinuity_check(const ResistanceNetwork& net, double T, double alpha, int n,
                                          std::size_t replicas, std::uint64_t seed, std::size_t start) {
    if (!(alpha > 0.0 && alpha < 0.5)) throw Error("alpha must lie in (0, 1/2)");
    if (replicas == 0) throw Error("at least one replica required");
    const auto& r = net.resistance_metric();
    const double muf = net.total_mass();
    EquicontinuityReport rep;
    rep.replicas = replicas;
    rep.threshold = constants::c_alpha_local_time(alpha) * std::sqrt(muf) * std::pow(2.0, -(0.5 - alpha) * n);
    const double pre = 2.0 * std::exp(T);
    rep.rhs_bound = chaining_rhs(
                        r, n, [&](double u) { return 2.0 * std::sqrt(2.0 * muf) * std::pow(u, 0.5 - alpha); },
                        [&](double u) { return pre * std::exp(-std::pow(u, -alpha)); })
                        .probability;
    const double cutoff = std::ldexp(1.0, -n + 1);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t x = 0; x < net.size(); ++x)
        for (std::size_t y = x + 1; y < net.size(); ++y)
            if (r(x, y) < cutoff) pairs.emplace_back(x, y);
    std::size_t exceed = 0;
    if (!pairs.empty())
        for (std::size_t i = 0; i < replicas; ++i) {
            Rng rng = stream(seed, i);
            auto path = simulate_walk(net, start, T, rng);
            if (modulus_over_pairs(path, net.mu(), pairs, T) > rep.threshold) ++exceed;
        }
    rep.lhs_freq = double(exceed) / double(replicas);
    rep.std_error = std::sqrt(rep.lhs_freq * (1.0 - rep.lhs_freq) / double(replicas));
    rep.pass = rep.lhs_freq <= rep.rhs_bound + 3.0 * rep.std_error;
    return rep;
}

PairwiseTailReport pairwise_tail_check(const ResistanceNetwork& net, std::size_t x, std::size_t y, double T,
                                       double delta, std::size_t replicas, std::uint64_t seed) {
    if (replicas == 0) throw Error("at least one replica required");
    auto u = potential_density(net, 1.0);
    double c = u(0, 0);
    for (std::size_t v = 0; v < net.size(); ++v) c = std::min(c, u(v, v));
    PairwiseTailReport rep;
    rep.bound = 2.0 * std::exp(T) *
                std::exp(-delta / (constants::c_K(c) * std::pow(effective_resistance(net, x, y), 0.25)));
    std::vector<std::pair<std::size_t, std::size_t>> pairs{{x, y}};
    std::size_t exceed = 0;
    for (std::size_t i = 0; i < replicas; ++i) {
        Rng rng = stream(seed, i);
        auto path = simulate_walk(net, x, T, rng);
        if (modulus_over_pairs(path, net.mu(), pairs, T) > 2.0 * delta) ++exceed;
    }
    rep.freq = double(exceed) / double(replicas);
    rep.std_error = std::sqrt(rep.freq * (1.0 - rep.freq) / double(replicas));
    rep.pass = rep.freq <= rep.bound + 3.0 * rep.std_error;
    return rep;
}

}  // namespace reslim
