#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "reslim/entropy.hpp"
#include "reslim/trees.hpp"

using namespace reslim;

TEST_CASE("covering numbers") {
    auto one = oracle::point();
    CHECK(covering_number(one, 0.01) == 1);
    FiniteMetricSpace p(oracle::path_matrix(4));
    CHECK(covering_number(p, 1.0) == 2);
    CHECK(covering_number(p, 3.0) == 1);
    CHECK(covering_number(p, 0.5) == 4);
}

TEST_CASE("exact covering agrees with subset enumeration and the bounds bracket it") {
    Rng rng = stream(21, 0);
    for (int rep = 0; rep < 60; ++rep) {
        auto s = oracle::plane_points(3 + rep % 8, rng);
        for (double eps : {0.05, 0.15, 0.3, 0.6}) {
            auto want = oracle::cover(s, eps);
            CHECK(covering_number(s, eps) == want);
            auto b = covering_bounds(s, eps);
            CHECK(b.lower <= want);
            CHECK(b.upper >= want);
        }
    }
}

TEST_CASE("tail sum of a single point") {
    auto one = oracle::point();
    double want = 0.0;
    for (int k = 1; k <= 200; ++k) want += std::exp(-std::pow(2.0, 0.25 * k));
    CHECK(entropy_tail_sum(one, 0.25, 1).value == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("tail sum past saturation is n squared times the exponential tail") {
    FiniteMetricSpace p(oracle::path_matrix(4));
    double want = 0.0;
    for (int k = 3; k <= 400; ++k) want += 16.0 * std::exp(-std::pow(2.0, 0.3 * k));
    CHECK(entropy_tail_sum(p, 0.3, 3).value == doctest::Approx(want).epsilon(1e-12));
    CHECK(std::isfinite(entropy_tail_sum(p, 0.1, -5).value));
}

TEST_CASE("tail sum over a mixed range against direct summation") {
    Rng rng = stream(22, 0);
    auto s = oracle::plane_points(7, rng);
    double want = 0.0;
    for (int k = -2; k <= 300; ++k) {
        double n = double(oracle::cover(s, std::ldexp(1.0, -k)));
        want += n * n * std::exp(-std::pow(2.0, 0.4 * k));
    }
    CHECK(entropy_tail_sum(s, 0.4, -2).value == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("entropy profile saturates") {
    FiniteMetricSpace p(oracle::path_matrix(4));
    auto prof = entropy_profile(p, 0, 0.25, CoverMode::exact);
    REQUIRE(!prof.rows.empty());
    CHECK(prof.rows.front().n == 2);
    CHECK(prof.rows.back().n == 4);
    for (std::size_t i = 1; i < prof.rows.size(); ++i) CHECK(prof.rows[i].n >= prof.rows[i - 1].n);
}

TEST_CASE("dudley integral") {
    CHECK(dudley_integral(oracle::point(), 1.0) == 0.0);
    FiniteMetricSpace two({{0, 1}, {1, 0}});
    CHECK(dudley_integral(two, 1.0) == doctest::Approx(std::sqrt(std::log(2.0))).epsilon(1e-12));

    for (double step : {1.0, 0.01}) {
        FiniteMetricSpace p(oracle::path_matrix(4, step));
        const double q = 0.25;
        std::vector<std::vector<double>> dq(4, std::vector<double>(4));
        std::vector<double> breaks;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                dq[i][j] = std::pow(p(i, j), q);
                if (i < j) breaks.push_back(dq[i][j]);
            }
        std::sort(breaks.begin(), breaks.end());
        FiniteMetricSpace s(dq);
        // N is constant between consecutive distances, so cache it per bracket.
        std::vector<double> cache(breaks.size() + 1, -1.0);
        const int cells = 2000000;
        double sum = 0.0;
        for (int i = 0; i < cells; ++i) {
            double r = (i + 0.5) / cells;
            std::size_t slot = std::size_t(std::upper_bound(breaks.begin(), breaks.end(), r) - breaks.begin());
            if (cache[slot] < 0.0) cache[slot] = std::sqrt(std::log(double(oracle::cover(s, r))));
            sum += cache[slot];
        }
        CHECK(dudley_integral(p, q) == doctest::Approx(sum / cells).epsilon(1e-6));
    }
}

TEST_CASE("volume bound on a path") {
    FiniteMetricSpace p(oracle::path_matrix(10));
    std::vector<double> w(10, 1.0);
    std::vector<std::size_t> centers;
    for (std::size_t i = 0; i < 10; ++i) centers.push_back(i);
    auto v = volume_profile(p, w, centers, {0.0, 1.0, 2.0, 3.0, 4.0});
    CHECK(v.at(1.0) == doctest::Approx(2.0));
    CHECK(entropy_bound_from_volume(10.0, v, 4.0) == doctest::Approx(5.0));
    auto ball = p.subspace({0, 1, 2, 3, 4});
    CHECK(double(oracle::cover(ball, 4.0)) <= 5.0);

    auto one = oracle::point();
    auto v1 = volume_profile(one, {1.0}, {0}, {0.0, 1.0});
    CHECK(entropy_bound_from_volume(1.0, v1, 1.0) >= 1.0);
}

TEST_CASE("volume bound dominates exact covering on random trees") {
    Rng rng = stream(23, 0);
    for (int rep = 0; rep < 30; ++rep) {
        auto net = random_tree_network(12, rng);
        const auto& r = net.resistance_metric();
        std::vector<std::size_t> all;
        for (std::size_t i = 0; i < r.size(); ++i) all.push_back(i);
        std::vector<double> radii;
        for (int i = 0; i <= 40; ++i) radii.push_back(0.1 * i);
        auto v = volume_profile(r, net.mu(), all, radii);
        for (double u : {0.4, 0.8, 1.6, 3.2})
            CHECK(double(oracle::cover(r, u)) <= entropy_bound_from_volume(net.total_mass(), v, u) + 1e-12);
    }
}

TEST_CASE("condition checker on constant single points") {
    std::vector<ConditionIvInstance> seq(5, ConditionIvInstance{oracle::point(), 0, 1.0, 1.0, 2.0});
    auto rep = check_condition_iv(seq, 1.0, 0.4, [](double u) { return std::min(u, 1.0); }, 2.0);
    CHECK(rep.pass_rate == 1.0);
    for (char p : rep.pass) CHECK(p);
}

TEST_CASE("vanishing factor with polylog c eventually decays") {
    // b^2 exp(-c^alpha) with b = n, c = (log n)^3, alpha = 0.4 decays only once
    // (log n)^1.2 outgrows 2 log n, i.e. well past n = 1e6.
    auto log_factor = [](double log_n) { return 2.0 * log_n - std::pow(std::pow(log_n, 3.0), 0.4); };
    CHECK(log_factor(std::log(1e6)) > 0.0);
    CHECK(std::exp(log_factor(std::log(1e40))) < 1e-6);
    double prev = log_factor(std::log(1e20));
    for (double e = 25; e <= 80; e += 5) {
        double cur = log_factor(e * std::log(10.0));
        CHECK(cur < prev);
        prev = cur;
    }
    std::vector<ConditionIvInstance> seq;
    for (double n : {1e2, 1e6, 1e20, 1e40}) {
        double c = std::pow(std::log(n), 3.0);
        seq.push_back(ConditionIvInstance{oracle::point(), 0, 1.0, n, c});
    }
    auto rep = check_condition_iv(seq, 1.0, 0.4, [](double) { return 0.0; }, 2.0);
    REQUIRE(rep.vanishing.size() == 4);
    CHECK(rep.vanishing[3] < 1e-6);
    CHECK(rep.vanishing[3] < rep.vanishing[2]);
}

TEST_CASE("volume lower bound on conditioned GW trees holds with calibrated constant") {
    const double gamma = 0.25;
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(0.05 * std::pow(40.0, i / 20.0));
    auto law = geometric_offspring();
    for (std::size_t n : {100u, 400u}) {
        const double bn = std::sqrt(double(n));
        std::vector<double> cal;
        for (std::uint64_t s = 0; s < 50; ++s) {
            Rng rng = stream(900 + n, s);
            cal.push_back(volume_check_gw(gw_tree_conditioned(law, n, rng), gamma, 0.0, bn, grid).best_constant);
        }
        std::sort(cal.begin(), cal.end());
        const double c = cal[2];
        int pass = 0;
        for (std::uint64_t s = 0; s < 50; ++s) {
            Rng rng = stream(24, n * 1000 + s);
            pass += volume_check_gw(gw_tree_conditioned(law, n, rng), gamma, c, bn, grid).pass;
        }
        CHECK(pass >= 45);
    }
}
