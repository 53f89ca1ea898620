#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "reslim/error.hpp"
#include "reslim/gh.hpp"
#include "reslim/metric_core.hpp"
#include "reslim/process.hpp"

namespace reslim {

/// Strictly increasing piecewise-linear map with lambda(0) = 0, extended
/// past the last knot with tail_slope.
class TimeChange {
public:
    TimeChange() = default;
    explicit TimeChange(std::vector<std::pair<double, double>> knots, double tail_slope = 1.0);

    double operator()(double s) const;
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }
    double tail_slope() const { return tail_; }

private:
    std::vector<std::pair<double, double>> knots_{{0.0, 0.0}};
    double tail_ = 1.0;
};

/// 2 (t v 1) sup over segments meeting [0, t] of |log slope|.
double lambda_dag_norm(const TimeChange& lambda, double t);

/// sup_{0<=s<=t} |lambda(s) - s|.
double sup_displacement(const TimeChange& lambda, double t);

/// Upper bound on a_eps(X, Y); states index into z. Infinite when the kill
/// times cannot be matched. budget caps the alignment transitions examined.
ExtReal a_epsilon(const KilledPath& x, const KilledPath& y, double eps, const FiniteMetricSpace& z,
                  std::size_t budget = 200000);

/// Upper bound on d_J1' by scanning and bisecting eps. In [0, 1/2].
double j1prime_distance(const KilledPath& x, const KilledPath& y, const FiniteMetricSpace& z, double tol = 1e-12,
                        std::size_t budget = 200000);

/// Piecewise-linear curve through ascending knots, constant after the last one.
using Curve = std::vector<std::pair<double, double>>;

struct GridFunction {
    double h = 1.0;
    std::vector<double> values;  // f(k h)

    Curve curve() const;
};

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// sum_n 2^{-n} max_{[0,n]} (|f-g| ^ 1) over n <= n_max, with the tail as an
/// interval. n_max defaults to the floor of the shorter curve's range.
Interval d_U(const Curve& f, const Curve& g, int n_max = -1);
Interval d_U(const GridFunction& f, const GridFunction& g);

/// Local-time graph: points of an ambient space with their time curves.
struct LocalTimeGraph {
    std::vector<std::size_t> points;
    std::vector<Curve> curves;
};

/// Hausdorff distance of the graphs under max(d_Z, d_U upper). +inf when exactly one is empty.
ExtReal d_HL(const LocalTimeGraph& a, const LocalTimeGraph& b, const FiniteMetricSpace& z, int n_max = -1);

/// sup over index pairs (i, j) of max(d_Z(a.points[i], b.points[j]), d_U(a.curves[i], b.curves[j])).
ExtReal d_HL(const LocalTimeGraph& a, const LocalTimeGraph& b, const FiniteMetricSpace& z, const Correspondence& c,
             int n_max = -1);

/// Compact space with root, measure, path and local-time curves (one per point).
struct ProcessSystem {
    RootedMeasuredSpace space;
    KilledPath path;
    std::vector<Curve> local_time;
    int n_max = -1;  // d_U range; -1 = from the curves
};

ProcessSystem make_process_system(const ResistanceNetwork& net, std::size_t root, const KilledPath& path,
                                  int n_max);

struct DcResult {
    double value = 0.0;
    double root = 0.0;
    double prohorov = 0.0;
    double j1prime = 0.0;
    double local_time = 0.0;
};

DcResult d_Dc(const ProcessSystem& a, const ProcessSystem& b, const Correspondence& c, double delta,
              std::size_t budget = 200000);

/// Integral of e^{-r} (1 ^ d_Dc(a^(r), b^(r))) over r > 0, exact for the
/// piecewise-constant integrand; paths killed on leaving the ball.
double d_D(const ProcessSystem& a, const ProcessSystem& b, const Correspondence& c, double delta,
           std::size_t budget = 200000);

}  // namespace reslim
