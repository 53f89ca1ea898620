#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "reslim/constants.hpp"
#include "reslim/entropy.hpp"
#include "reslim/process.hpp"

using namespace reslim;

namespace {

ResistanceNetwork two_point() { return ResistanceNetwork(2, {{0, 1, 1.0}}, {1.0, 1.0}); }

/// Time spent at x up to t, read straight off the event list.
double occupation(const KilledPath& p, std::size_t x, double t) {
    double end_all = std::min(t, p.kill_time.as_double());
    double total = 0.0;
    for (std::size_t i = 0; i < p.events.size(); ++i) {
        double a = p.events[i].t;
        double b = i + 1 < p.events.size() ? p.events[i + 1].t : end_all;
        b = std::min(b, end_all);
        if (p.events[i].state == x && b > a) total += b - a;
    }
    return total;
}

}  // namespace

TEST_CASE("walk starts at the start vertex and respects the horizon") {
    auto net = path_network(5);
    Rng rng = stream(51, 0);
    auto p = simulate_walk(net, 3, 2.0, rng);
    CHECK(p.at(0.0) == 3);
    CHECK(p.events.front().t == 0.0);
    CHECK(p.horizon == 2.0);
    CHECK_NOTHROW(p.validate(5));
    for (const auto& e : p.events) CHECK(e.t <= 2.0);
}

TEST_CASE("holding times on two points are standard exponential") {
    Rng rng = stream(52, 0);
    auto p = simulate_walk(two_point(), 0, 1.3e5, rng);
    REQUIRE(p.events.size() > 100001);
    double sum = 0.0, sq = 0.0;
    const int holds = 100000;
    for (int i = 0; i < holds; ++i) {
        double h = p.events[i + 1].t - p.events[i].t;
        sum += h, sq += h * h;
    }
    double mean = sum / holds, se = std::sqrt((sq / holds - mean * mean) / holds);
    CHECK(std::fabs(mean - 1.0) < 3.0 * se);
    double frac0 = occupation(p, 0, 1.3e5) / 1.3e5;
    CHECK(std::fabs(frac0 - 0.5) < 0.01);
}

TEST_CASE("local times") {
    Rng rng = stream(53, 0);
    auto net = random_tree_network(6, rng);
    auto p = simulate_walk(net, 0, 5.0, rng);
    auto lt = local_times(p, net);
    for (std::size_t x = 0; x < net.size(); ++x) CHECK(lt(x, 0.0) == 0.0);
    for (double t : {0.5, 2.0, 5.0}) {
        double total = 0.0;
        for (std::size_t x = 0; x < net.size(); ++x) {
            total += lt(x, t) * net.mu()[x];
            CHECK(lt(x, t) * net.mu()[x] == doctest::Approx(occupation(p, x, t)).epsilon(1e-12));
        }
        CHECK(total == doctest::Approx(t).epsilon(1e-12));
    }
    CHECK_THROWS_AS(lt(0, 6.0), Error);

    auto two = two_point();
    for (int rep = 0; rep < 10; ++rep) {
        Rng r2 = stream(54, rep);
        auto q = simulate_walk(two, 0, 5.0, r2);
        auto l2 = local_times(q, two);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> f{u(r2), u(r2)};
        double want = f[0] * l2(0, 5.0) + f[1] * l2(1, 5.0);
        CHECK(std::fabs(occupation_integral(q, [&](std::size_t y) { return f[y]; }, 5.0) - want) < 1e-9);
    }
}

TEST_CASE("kernel local time") {
    Rng rng = stream(55, 0);
    auto net = random_tree_network(10, rng);
    auto p = simulate_walk(net, 0, 3.0, rng);
    auto lt = local_times(p, net);
    const double dmin = net.resistance_metric().min_positive_distance();
    for (std::size_t x = 0; x < net.size(); ++x) {
        CHECK(kernel_local_time(p, net, 0.5 * dmin, x, 3.0) == doctest::Approx(lt(x, 3.0)).epsilon(1e-12));
        CHECK(kernel_local_time(p, net, 1.0, x, 0.0) == 0.0);
    }
    for (double delta : {0.5, 1.0, 2.0, 4.0}) {
        double mod = local_time_modulus(p, net, delta, 3.0);
        for (std::size_t x = 0; x < net.size(); ++x)
            CHECK(std::fabs(kernel_local_time(p, net, delta, x, 3.0) - lt(x, 3.0)) <= mod + 1e-12);
    }
}

TEST_CASE("trace process") {
    Rng rng = stream(56, 0);
    auto net = random_tree_network(8, rng);
    auto p = simulate_walk(net, 0, 4.0, rng);
    auto whole = trace_process(p, net, 1e6);
    REQUIRE(whole.path.events.size() == p.events.size());
    for (std::size_t i = 0; i < p.events.size(); ++i) {
        CHECK(whole.path.events[i].state == p.events[i].state);
        CHECK(whole.path.events[i].t == doctest::Approx(p.events[i].t));
    }

    auto two = two_point();
    Rng r2 = stream(56, 1);
    auto q = simulate_walk(two, 0, 10.0, r2);
    auto tr = trace_process(q, two, 0.5);
    CHECK(tr.ball == std::vector<std::size_t>{0});
    for (const auto& e : tr.path.events) CHECK(e.state == 0);
    CHECK(tr.path.horizon == doctest::Approx(occupation(q, 0, 10.0)));

    // A path that never leaves the ball is its own trace.
    int checked = 0;
    for (int rep = 0; rep < 200 && checked < 20; ++rep) {
        Rng r3 = stream(57, rep);
        auto w = simulate_walk(net, 0, 0.3, r3);
        const auto& rm = net.resistance_metric();
        double r = 1.5;
        bool inside = true;
        for (const auto& e : w.events) inside = inside && rm(0, e.state) < r;
        if (!inside) continue;
        ++checked;
        auto t = trace_process(w, net, r);
        REQUIRE(t.path.events.size() == w.events.size());
        for (std::size_t i = 0; i < w.events.size(); ++i) {
            CHECK(t.path.events[i].state == w.events[i].state);
            CHECK(t.path.events[i].t == doctest::Approx(w.events[i].t).epsilon(1e-12));
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("exit and hitting times") {
    KilledPath p{{{0.0, 0}, {1.0, 1}, {2.5, 0}, {3.0, 2}}, ExtReal::infinity(), 4.0};
    CHECK(exit_time(p, {0, 1, 2}).is_infinite());
    CHECK(exit_time(p, {0, 1}).value() == doctest::Approx(3.0));
    CHECK(hitting_time(p, {0}).value() == 0.0);
    CHECK(hitting_time(p, {2}).value() == doctest::Approx(3.0));
    CHECK(first_return_time(p, {0}).value() == doctest::Approx(2.5));
    CHECK(hitting_time(p, {5}).is_infinite());
}

TEST_CASE("exit probability bound holds empirically") {
    Rng rng = stream(58, 0);
    auto net = random_tree_network(10, rng);
    const auto& rm = net.resistance_metric();
    const std::size_t reps = 2000;
    for (double r : {1.0, 2.0}) {
        std::vector<std::size_t> ball;
        for (std::size_t x = 0; x < net.size(); ++x)
            if (rm(0, x) < r) ball.push_back(x);
        for (double t : {0.1, 0.5}) {
            std::size_t hits = 0;
            for (std::size_t i = 0; i < reps; ++i) {
                Rng w = stream(59, i);
                auto path = simulate_walk(net, 0, t, w);
                hits += exit_time(path, ball) <= ExtReal(t);
            }
            double freq = double(hits) / reps, se = std::sqrt(freq * (1 - freq) / reps);
            auto out = ball_complement_resistance(net, 0, r);
            if (out.is_infinite()) continue;
            for (double delta : {0.25 * out.value(), 0.5 * out.value()}) {
                CHECK(freq <= exit_probability_bound(net, 0, r, delta, t) + 3 * se);
            }
        }
    }
}

TEST_CASE("chaining right-hand side") {
    FiniteMetricSpace p(oracle::path_matrix(4));
    auto zero = chaining_rhs(p, 2, [](double u) { return u; }, [](double) { return 0.0; });
    CHECK(zero.probability == 0.0);

    const double alpha = 0.3, T = 1.0, muf = 4.0;
    auto net = path_network(4);
    auto rep = equicontinuity_check(net, T, alpha, 2, 200, 1);
    double want = 0.0;
    for (int k = 2; k <= 400; ++k) {
        double n = double(oracle::cover(p, std::ldexp(1.0, -k)));
        want += (k + 1.0) * (k + 1.0) * n * n * 2.0 * std::exp(T) * std::exp(-std::pow(std::ldexp(1.0, -k + 3), -alpha));
    }
    CHECK(rep.rhs_bound == doctest::Approx(want).epsilon(1e-12));
    CHECK(rep.threshold ==
          doctest::Approx(constants::c_alpha_local_time(alpha) * std::sqrt(muf) * std::pow(2.0, -(0.5 - alpha) * 2)));
}

TEST_CASE("equicontinuity check") {
    auto net = path_network(4);
    auto empty = equicontinuity_check(net, 1.0, 0.3, 3, 100, 1);
    CHECK(empty.lhs_freq == 0.0);
    CHECK(empty.pass);

    Rng rng = stream(60, 0);
    auto tree = random_tree_network(10, rng);
    auto rep = equicontinuity_check(tree, 1.0, 0.4, 1, 2000, 2);
    CHECK(rep.pass);
    CHECK(rep.lhs_freq <= rep.rhs_bound + 3 * rep.std_error);
}

TEST_CASE("pairwise tail check") {
    Rng rng = stream(61, 0);
    auto net = random_tree_network(6, rng);
    auto rep = pairwise_tail_check(net, 0, 1, 1.0, 0.5, 2000, 3);
    CHECK(rep.pass);
}
