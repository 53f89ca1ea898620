#include "doctest.h"
#include "oracles.hpp"
#include "reslim/metric_core.hpp"

using namespace reslim;

TEST_CASE("metric validation rejects broken matrices") {
    CHECK_THROWS_AS(FiniteMetricSpace({{0, 1}, {2, 0}}), Error);
    CHECK_THROWS_AS(FiniteMetricSpace({{0, 0}, {0, 0}}), Error);
    CHECK_THROWS_AS(FiniteMetricSpace({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}), Error);
    CHECK_THROWS_AS(FiniteMetricSpace({{1, 1}, {1, 0}}), Error);
    CHECK_NOTHROW(FiniteMetricSpace(oracle::path_matrix(5)));
}

TEST_CASE("hausdorff distance") {
    FiniteMetricSpace z(oracle::path_matrix(4));
    CHECK(hausdorff_distance({0, 1}, {0, 1}, z) == 0.0);
    CHECK(hausdorff_distance({0}, {3}, z) == doctest::Approx(3.0));
    CHECK(hausdorff_distance({0, 3}, {0}, z) == doctest::Approx(3.0));

    Rng rng = stream(11, 0);
    for (int rep = 0; rep < 50; ++rep) {
        auto s = oracle::plane_points(6, rng);
        std::vector<std::size_t> a{0, 1, 2}, b{3, 4, 5};
        double want = 0.0;
        for (auto x : a) {
            double m = 1e9;
            for (auto y : b) m = std::min(m, s(x, y));
            want = std::max(want, m);
        }
        for (auto y : b) {
            double m = 1e9;
            for (auto x : a) m = std::min(m, s(x, y));
            want = std::max(want, m);
        }
        CHECK(hausdorff_distance(a, b, s) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("prohorov distance") {
    FiniteMetricSpace two({{0, 1}, {1, 0}});
    CHECK(prohorov_distance({0.4, 0.6}, {0.4, 0.6}, two) == 0.0);
    CHECK(prohorov_distance({1, 0}, {0, 1}, two) == doctest::Approx(1.0));
    CHECK(prohorov_distance({1, 0}, {1, 0.3}, two) == doctest::Approx(0.3));
}

TEST_CASE("prohorov distance against subset enumeration") {
    Rng rng = stream(12, 0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 40; ++rep) {
        std::size_t n = 2 + rep % 5;
        auto s = oracle::plane_points(n, rng);
        std::vector<double> m1(n), m2(n);
        for (std::size_t i = 0; i < n; ++i) m1[i] = u(rng) / double(n), m2[i] = u(rng) / double(n);
        CHECK(prohorov_distance(m1, m2, s) == doctest::Approx(oracle::prohorov(m1, m2, s)).epsilon(1e-9));
    }
}

TEST_CASE("restrict to ball") {
    FiniteMetricSpace z(oracle::path_matrix(4));
    RootedMeasuredSpace g(z, 0, {1, 1, 1, 1});
    CHECK(restrict_to_ball(g, 0.0).size() == 1);
    CHECK(ball_indices(g, 2.5) == std::vector<std::size_t>{0, 1, 2});
    CHECK(ball_indices(g, 2.0) == std::vector<std::size_t>{0, 1});
    CHECK(restrict_to_ball(g, 10.0).size() == 4);
    auto sub = restrict_to_ball(RootedMeasuredSpace(z, 2, {1, 2, 3, 4}), 1.5);
    CHECK(sub.size() == 3);
    CHECK(sub.total_mass() == doctest::Approx(9.0));
    CHECK(sub.weights[sub.root] == doctest::Approx(3.0));
}

TEST_CASE("distortion") {
    FiniteMetricSpace x(oracle::path_matrix(3));
    CHECK(distortion(Correspondence::diagonal(3), x, x) == 0.0);
    FiniteMetricSpace two({{0, 1}, {1, 0}});
    auto one = oracle::point();
    CHECK(distortion(Correspondence{{{0, 0}, {1, 0}}}, two, one) == doctest::Approx(1.0));
    CHECK(distortion(Correspondence{{{0, 2}, {1, 1}, {2, 0}}}, x, x) == 0.0);
    Correspondence partial{{{0, 0}}};
    CHECK_THROWS_AS(partial.validate(2, 1), Error);
}
