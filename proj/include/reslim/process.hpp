#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "reslim/error.hpp"
#include "reslim/metric_core.hpp"
#include "reslim/resistance.hpp"
#include "reslim/rng.hpp"

namespace reslim {

/// Cemetery state.
inline constexpr std::size_t kCemetery = std::numeric_limits<std::size_t>::max();

struct PathEvent {
    double t;
    std::size_t state;
};

/// Cadlag step path: state events[i].state on [events[i].t, events[i+1].t),
/// the cemetery from kill_time on. Beyond the last event the state holds.
/// horizon marks how far the path was observed.
struct KilledPath {
    std::vector<PathEvent> events;
    ExtReal kill_time = ExtReal::infinity();
    double horizon = std::numeric_limits<double>::infinity();

    std::size_t at(double t) const;
    /// Throws on unsorted times, repeated states, or states >= nstates.
    void validate(std::size_t nstates) const;
    /// Jump times in (0, kill_time), i.e. event times after the first.
    std::size_t jumps() const { return events.empty() ? 0 : events.size() - 1; }
};

KilledPath kill(const KilledPath& x, ExtReal t);

KilledPath simulate_walk(const ResistanceNetwork& net, std::size_t start, double horizon, Rng& rng);

/// Occupation intervals per vertex, divided by mu.
class LocalTimeField {
public:
    LocalTimeField() = default;
    LocalTimeField(const KilledPath& path, const std::vector<double>& mu);

    std::size_t size() const { return mu_.size(); }
    double horizon() const { return horizon_; }
    const std::vector<double>& mu() const { return mu_; }
    /// L(x, t); t beyond the observed horizon is rejected.
    double operator()(std::size_t x, double t) const;
    /// Knots (t, L(x,t)) of the piecewise-linear curve on [0, t_max].
    std::vector<std::pair<double, double>> curve(std::size_t x, double t_max) const;
    const std::vector<std::pair<double, double>>& intervals(std::size_t x) const { return iv_[x]; }

private:
    std::vector<double> mu_;
    std::vector<std::vector<std::pair<double, double>>> iv_;
    std::vector<std::vector<double>> before_;  // occupation before each interval
    double horizon_ = 0.0;
};

LocalTimeField local_times(const KilledPath& path, const ResistanceNetwork& net);

/// integral_0^t f(X_s) ds straight from the event ledger (cemetery contributes 0).
double occupation_integral(const KilledPath& path, const std::function<double(std::size_t)>& f, double t);

/// g_delta(x, t) with f_delta(x, y) = max(0, delta - R(x, y)).
double kernel_local_time(const KilledPath& path, const ResistanceNetwork& net, double delta, std::size_t x,
                         double t);

struct TraceResult {
    KilledPath path;
    LocalTimeField local_times;
    std::vector<std::size_t> ball;  // vertices of F^(r)
};

/// Time change of the path by the inverse of its occupation of
/// F^(r) = {x : R(root, x) < r} plus root. root defaults to the start state.
TraceResult trace_process(const KilledPath& path, const ResistanceNetwork& net, double r,
                          std::size_t root = kCemetery);

/// eta_A = inf{t >= 0 : X_t not in A}; infinite if it never happens in the observed window.
ExtReal exit_time(const KilledPath& path, const std::vector<std::size_t>& a);
/// sigma_A = inf{t > 0 : X_t in A}; 0 when the path starts in A.
ExtReal hitting_time(const KilledPath& path, const std::vector<std::size_t>& a);
/// First time after the first jump at which the path is in A.
ExtReal first_return_time(const KilledPath& path, const std::vector<std::size_t>& a);

/// 4 delta / R(rho, B^c) + 4 t / (mu(B(rho, delta)) (R(rho, B^c) - delta)), B = B(rho, r).
double exit_probability_bound(const ResistanceNetwork& net, std::size_t rho, double r, double delta, double t);

/// sup over pairs with R(x,y) < cutoff of sup_{t <= T} |L_t(x) - L_t(y)|; 0 without pairs.
double local_time_modulus(const KilledPath& path, const ResistanceNetwork& net, double cutoff, double T);

struct ChainingRhs {
    double threshold = 0.0;    // 2 sum_{k>=n} r(2^{-k+3})
    double probability = 0.0;  // sum_{k>=n} (k+1)^2 N(F, 2^{-k})^2 q(2^{-k+3})
    int last_k = 0;
};

/// Terms added until they fall below 1e-16 of the partial sums (after the
/// covering numbers saturate), at most 4000 terms.
ChainingRhs chaining_rhs(const FiniteMetricSpace& space, int n, const std::function<double(double)>& r_fn,
                         const std::function<double(double)>& q_fn);

struct EquicontinuityReport {
    double threshold = 0.0;
    double rhs_bound = 0.0;
    double lhs_freq = 0.0;
    double std_error = 0.0;
    std::size_t replicas = 0;
    bool pass = false;
};

EquicontinuityReport equicontinuity_check(const ResistanceNetwork& net, double T, double alpha, int n,
                                          std::size_t replicas, std::uint64_t seed, std::size_t start = 0);

struct PairwiseTailReport {
    double freq = 0.0;
    double bound = 0.0;
    double std_error = 0.0;
    bool pass = false;
};

/// P_x(sup_{t<=T} |L_t(x) - L_t(y)| > 2 delta) against 2 e^T exp(-delta / (c_K R(x,y)^{1/4})).
PairwiseTailReport pairwise_tail_check(const ResistanceNetwork& net, std::size_t x, std::size_t y, double T,
                                       double delta, std::size_t replicas, std::uint64_t seed);

}  // namespace reslim
