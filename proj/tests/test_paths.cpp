#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "reslim/paths.hpp"

using namespace reslim;

namespace {

KilledPath constant(std::size_t state, double horizon = 10.0) { return KilledPath{{{0.0, state}}, ExtReal::infinity(), horizon}; }

Curve flat(double v, double end = 20.0) { return {{0.0, v}, {end, v}}; }

}  // namespace

TEST_CASE("kill") {
    KilledPath p{{{0.0, 0}, {1.0, 1}, {2.0, 2}}, ExtReal::infinity(), 5.0};
    auto k0 = kill(p, 0.0);
    CHECK(k0.at(0.0) == kCemetery);
    CHECK(k0.at(3.0) == kCemetery);
    auto same = kill(p, ExtReal::infinity());
    CHECK(same.events.size() == 3);
    CHECK(same.kill_time.is_infinite());
    auto mid = kill(p, 1.5);
    CHECK(mid.events.size() == 2);
    CHECK(mid.at(1.2) == 1);
    CHECK(mid.at(1.5) == kCemetery);
    CHECK(mid.kill_time.value() == 1.5);
    auto twice = kill(mid, 1.5);
    CHECK(twice.events.size() == mid.events.size());
    CHECK(twice.kill_time == mid.kill_time);
}

TEST_CASE("time change norms") {
    TimeChange id;
    CHECK(lambda_dag_norm(id, 3.0) == 0.0);
    CHECK(sup_displacement(id, 3.0) == 0.0);
    TimeChange dbl({{0.0, 0.0}, {1.0, 2.0}}, 2.0);
    CHECK(lambda_dag_norm(dbl, 1.0) == doctest::Approx(2.0 * std::log(2.0)));
    CHECK(sup_displacement(dbl, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(TimeChange({{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.5}}), Error);
}

TEST_CASE("small time-change norm forces small displacement") {
    Rng rng = stream(71, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int premise = 0;
    for (int rep = 0; rep < 400; ++rep) {
        std::vector<std::pair<double, double>> knots{{0.0, 0.0}};
        double s = 0.0, l = 0.0, spread = 0.02 + 0.5 * u(rng);
        for (int i = 0; i < 6; ++i) {
            double ds = 0.05 + u(rng);
            s += ds;
            l += ds * std::exp(spread * (2 * u(rng) - 1));
            knots.emplace_back(s, l);
        }
        TimeChange lam(knots, std::exp(spread * (2 * u(rng) - 1)));
        double t = 0.5 + 3 * u(rng);
        double norm = lambda_dag_norm(lam, t);
        if (norm < 1.0) {
            ++premise;
            double eps = norm + 0.5 * (1.0 - norm) * u(rng);
            CHECK(sup_displacement(lam, t) < eps);
        }
    }
    CHECK(premise > 50);
}

TEST_CASE("a_epsilon and d_J1 prime on constant paths") {
    FiniteMetricSpace z({{0, 0.1}, {0.1, 0}});
    auto x = constant(0), y = constant(1);
    CHECK(a_epsilon(x, x, 0.4, z).value() == 0.0);
    for (double eps : {0.25, 0.4, 0.45}) CHECK(a_epsilon(x, y, eps, z).value() == doctest::Approx(0.1));
    CHECK(j1prime_distance(x, x, z) == 0.0);
    CHECK(j1prime_distance(x, y, z) == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(j1prime_distance(y, x, z) == doctest::Approx(j1prime_distance(x, y, z)));
}

TEST_CASE("unmatched kill times make a_epsilon large") {
    FiniteMetricSpace z({{0, 0.1}, {0.1, 0}});
    auto x = constant(0);
    auto y = kill(x, 1.0);
    for (double eps : {0.1, 0.25, 0.4}) CHECK(max(a_epsilon(x, y, eps, z), a_epsilon(y, x, eps, z)) > ExtReal(1.0));
    double d = j1prime_distance(x, y, z);
    CHECK(d > 0.4);
    CHECK(d <= 0.5);
}

TEST_CASE("d_U") {
    CHECK(d_U(flat(1.0), flat(1.0)).upper == 0.0);
    auto tail = d_U(flat(0.0, 3.0), flat(0.25, 3.0));
    CHECK(tail.lower == doctest::Approx(0.25));
    CHECK(tail.upper == doctest::Approx(0.25 * 7.0 / 8.0 + 1.0 / 8.0));
    auto cap = d_U(flat(0.0), flat(2.0));
    CHECK(cap.lower <= 1.0);
    CHECK(cap.upper >= 1.0 - 1e-12);
    CHECK(cap.upper - cap.lower < 1e-5);
    auto half = d_U(flat(0.0), flat(0.5));
    CHECK(half.lower <= 0.5);
    CHECK(half.upper == doctest::Approx(0.5).epsilon(1e-5));
    GridFunction f{0.5, std::vector<double>(41, 0.0)}, g{0.5, std::vector<double>(41, 0.5)};
    CHECK(d_U(f, g).upper == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("d_HL") {
    FiniteMetricSpace z(oracle::path_matrix(3));
    LocalTimeGraph a{{0, 1, 2}, {flat(0.0), flat(1.0), flat(2.0)}};
    LocalTimeGraph b{{0, 1, 2}, {flat(0.5), flat(1.5), flat(2.5)}};
    auto diag = Correspondence::diagonal(3);
    CHECK(d_HL(a, a, z, diag).value() == 0.0);
    CHECK(d_HL(a, b, z, diag).value() == doctest::Approx(0.5).epsilon(1e-5));
    LocalTimeGraph none;
    CHECK(d_HL(a, none, z).is_infinite());
    CHECK(d_HL(none, none, z).value() == 0.0);
    CHECK(d_HL(a, a, z).value() == 0.0);
}

TEST_CASE("process system distances") {
    auto net = path_network(4);
    Rng rng = stream(72, 0);
    auto p = simulate_walk(net, 0, 20.0, rng);
    auto a = make_process_system(net, 0, p, 20);
    auto diag = Correspondence::diagonal(4);
    CHECK(d_Dc(a, a, diag, 1e-9).value <= 1e-8);
    CHECK(d_D(a, a, diag, 1e-9) <= 1e-8);

    auto b = a;
    for (auto& c : b.local_time)
        for (auto& k : c) k.second += 0.5;
    auto dc = d_Dc(a, b, diag, 1e-9);
    CHECK(dc.local_time >= 0.5);
    CHECK(dc.local_time <= 0.5 + std::ldexp(1.0, -20) + 1e-12);
    CHECK(dc.value == doctest::Approx(dc.local_time));
    CHECK(dc.value >= dc.root);
    CHECK(dc.value >= dc.prohorov);
    CHECK(dc.value >= dc.j1prime);

    auto worse = a;
    for (auto& c : worse.local_time)
        for (auto& k : c) k.second += 1.0;
    CHECK(d_D(a, worse, diag, 1e-9) >= d_D(a, b, diag, 1e-9) - 1e-12);
}

TEST_CASE("systems that differ only far out are close") {
    auto near = path_network(4);
    auto far = ResistanceNetwork(5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}}, {1, 1, 1, 1, 1});
    KilledPath p{{{0.0, 0}, {1.0, 1}}, ExtReal::infinity(), 2.0};
    auto a = make_process_system(near, 0, p, 2);
    auto b = make_process_system(far, 0, p, 2);
    Correspondence c{{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {3, 4}}};
    // Balls of radius below 3 coincide; beyond that the integrand is at most 1.
    CHECK(d_D(a, b, c, 1e-9) <= std::exp(-3.0) + 1e-9);
}
