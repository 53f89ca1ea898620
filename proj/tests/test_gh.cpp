#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "reslim/gh.hpp"
#include "reslim/trees.hpp"

using namespace reslim;

namespace {

/// Half the least distortion over every relation that is a correspondence.
double gh_enumerate(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    const std::size_t nx = x.size(), ny = y.size(), m = nx * ny;
    double best = 1e300;
    for (std::size_t mask = 1; mask < (std::size_t(1) << m); ++mask) {
        std::vector<char> hx(nx, 0), hy(ny, 0);
        for (std::size_t p = 0; p < m; ++p)
            if (mask >> p & 1) hx[p / ny] = hy[p % ny] = 1;
        if (std::count(hx.begin(), hx.end(), 0) || std::count(hy.begin(), hy.end(), 0)) continue;
        double dis = 0.0;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q)
                if ((mask >> p & 1) && (mask >> q & 1))
                    dis = std::max(dis, std::fabs(x(p / ny, q / ny) - y(p % ny, q % ny)));
        best = std::min(best, dis);
    }
    return best / 2.0;
}

CovarianceSpace random_cov_space(std::size_t n, Rng& rng) {
    std::normal_distribution<double> g;
    std::vector<double> a(n * n), s(n * n, 0.0);
    for (auto& v : a) v = g(rng);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) s[i * n + j] += a[i * n + k] * a[j * n + k];
    return CovarianceSpace(oracle::plane_points(n, rng), s);
}

}  // namespace

TEST_CASE("gh distance examples") {
    FiniteMetricSpace p(oracle::path_matrix(3));
    CHECK(gh_distance(p, p).value == 0.0);
    FiniteMetricSpace two({{0, 1}, {1, 0}});
    auto one = oracle::point();
    CHECK(gh_distance(two, one).value == doctest::Approx(0.5));
}

TEST_CASE("exact gh agrees with relation enumeration and is symmetric") {
    Rng rng = stream(31, 0);
    for (int rep = 0; rep < 40; ++rep) {
        auto x = oracle::plane_points(1 + rep % 3, rng);
        auto y = oracle::plane_points(1 + (rep / 3) % 4, rng);
        double want = gh_enumerate(x, y);
        CHECK(gh_distance(x, y).value == doctest::Approx(want).epsilon(1e-12));
        CHECK(gh_distance(y, x).value == doctest::Approx(want).epsilon(1e-12));
        auto s = gh_distance(x, y, GhMode::search);
        CHECK(s.value >= want - 1e-12);
        CHECK(distortion(s.correspondence, x, y) / 2.0 == doctest::Approx(s.value));
    }
}

TEST_CASE("glued space is a metric extending both sides") {
    Rng rng = stream(32, 0);
    auto x = oracle::plane_points(4, rng), y = oracle::plane_points(3, rng);
    Correspondence c{{{0, 0}, {1, 1}, {2, 2}, {3, 0}}};
    auto g = glue(x, y, c, 1e-3);
    auto z = g.materialize(x, y);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(z(i, j) == doctest::Approx(x(i, j)));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(z(4 + i, 4 + j) == doctest::Approx(y(i, j)));
}

TEST_CASE("ghp upper bound examples") {
    FiniteMetricSpace p(oracle::path_matrix(4));
    RootedMeasuredSpace g(p, 0, {0.1, 0.2, 0.3, 0.4});
    CHECK(ghp_upper_bound(g, g, Correspondence::diagonal(4)).bound <= 1e-8);

    RootedMeasuredSpace m1(oracle::point(), 0, {1.0}), m2(oracle::point(), 0, {2.0});
    CHECK(ghp_upper_bound(m1, m2, Correspondence::diagonal(1)).bound == doctest::Approx(1.0));

    PlaneTree edge(std::vector<long>{-1, 0});
    auto tb = ghp_tree_bounds(edge, 1.0, 1.0);
    CHECK(tb.computed.bound <= 2.5);
    CHECK(tb.paper_bound == doctest::Approx(2.5));
}

TEST_CASE("ghp bound dominates gh and is monotone in delta") {
    Rng rng = stream(33, 0);
    for (int rep = 0; rep < 20; ++rep) {
        auto x = oracle::plane_points(3, rng), y = oracle::plane_points(3, rng);
        RootedMeasuredSpace gx(x, 0, {0.3, 0.3, 0.4}), gy(y, 0, {0.2, 0.5, 0.3});
        auto gh = gh_distance(x, y);
        auto b1 = ghp_upper_bound(gx, gy, gh.correspondence, 1e-9);
        auto b2 = ghp_upper_bound(gx, gy, gh.correspondence, 1e-3);
        CHECK(b1.bound >= gh.value - 1e-9);
        CHECK(b1.bound <= b2.bound + 1e-15);
    }
}

TEST_CASE("entropy convergence along a scripted sequence") {
    FiniteMetricSpace limit({{0, 1}, {1, 0}});
    std::vector<FiniteMetricSpace> seq;
    for (int n = 1; n <= 30; ++n) seq.emplace_back(std::vector<std::vector<double>>{{0, 1 + 1.0 / n}, {1 + 1.0 / n, 0}});
    auto rep = entropy_convergence_check(seq, limit, {0.9, 1.0});
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].continuity);
    CHECK(rep.rows[0].limit_value == 2);
    CHECK(rep.rows[0].liminf == 2);
    CHECK_FALSE(rep.rows[1].continuity);
    CHECK(rep.rows[1].limit_value == 1);
    CHECK(rep.rows[1].liminf == 2);
    CHECK(rep.pass);
    CHECK(rep.gh_to_limit.back() == doctest::Approx(0.5 / 30));

    std::vector<FiniteMetricSpace> flat(5, limit);
    auto same = entropy_convergence_check(flat, limit, {0.5, 0.9, 1.5});
    for (const auto& row : same.rows)
        for (auto v : row.sequence_values) CHECK(v == row.limit_value);
}

TEST_CASE("hcov and hpr distances") {
    Rng rng = stream(34, 0);
    auto a = random_cov_space(3, rng);
    CHECK(hcov_upper(a, a, Correspondence::diagonal(3)) <= 1e-12);
    CovarianceSpace v1(oracle::point(), {1.0}), v2(oracle::point(), {2.0});
    CHECK(hcov_distance(v1, v2).value == doctest::Approx(1.0));
    FunctionSpace f{oracle::point(), {0.0}}, g{oracle::point(), {0.5}};
    CHECK(hpr_distance(f, g).value == doctest::Approx(0.5));
    CHECK(hpr_distance(f, f).value == 0.0);
    CHECK_THROWS_AS(check_psd(2, {1, 2, 2, 1}), Error);
}

TEST_CASE("hcov is symmetric and satisfies the triangle inequality") {
    Rng rng = stream(35, 0);
    for (int rep = 0; rep < 15; ++rep) {
        auto a = random_cov_space(3, rng), b = random_cov_space(3, rng), c = random_cov_space(3, rng);
        double ab = hcov_distance(a, b).value, ba = hcov_distance(b, a).value;
        double bc = hcov_distance(b, c).value, ac = hcov_distance(a, c).value;
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ac <= ab + bc + 1e-9);
    }
}
