#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "reslim/trees.hpp"

using namespace reslim;

namespace {

/// Sorted child lists give a canonical string for an unordered rooted tree.
std::string shape(const PlaneTree& t, std::size_t v) {
    std::vector<std::string> kids;
    for (auto c : t.children()[v]) kids.push_back(shape(t, c));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (const auto& k : kids) s += k;
    return s + ")";
}

PlaneTree random_recursive_tree(std::size_t n, Rng& rng) {
    std::vector<long> parent{-1};
    for (std::size_t i = 1; i < n; ++i) parent.push_back(long(std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)));
    return PlaneTree(parent);
}

/// Uniform Dyck path of length 2m: shuffle m ups and m+1 downs, rotate after the
/// first minimum, drop the final down step.
std::vector<int> dyck_path(std::size_t m, Rng& rng) {
    std::vector<int> steps(m, 1);
    steps.insert(steps.end(), m + 1, -1);
    std::shuffle(steps.begin(), steps.end(), rng);
    int s = 0, lo = 1;
    std::size_t at = 0;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        s += steps[i];
        if (s < lo) lo = s, at = i;
    }
    std::rotate(steps.begin(), steps.begin() + at + 1, steps.end());
    steps.pop_back();
    return steps;
}

double chi2_sf(double x, int dof) {
    return dof == 1 ? std::erfc(std::sqrt(x / 2.0)) : std::exp(-x / 2.0);
}

}  // namespace

TEST_CASE("plane tree validation") {
    CHECK_THROWS_AS(PlaneTree(std::vector<long>{-1, -1}), Error);
    CHECK_THROWS_AS(PlaneTree(std::vector<long>{1, 0}), Error);
    CHECK_THROWS_AS(PlaneTree(std::vector<long>{-1, 5}), Error);
    PlaneTree t(std::vector<long>{-1, 0, 0, 1});
    CHECK(t.depths() == std::vector<std::size_t>{0, 1, 1, 2});
    CHECK(t.preorder() == std::vector<std::size_t>{0, 1, 3, 2});
    CHECK(t.distances_from(3) == std::vector<std::size_t>{2, 1, 3, 0});
}

TEST_CASE("contour function") {
    PlaneTree edge(std::vector<long>{-1, 0});
    CHECK(contour_and_height(edge).contour.values == std::vector<double>{0, 1, 0});
    PlaneTree single;
    CHECK(contour_and_height(single).contour.values == std::vector<double>{0});
    Rng rng = stream(81, 0);
    for (int rep = 0; rep < 50; ++rep) {
        auto t = random_recursive_tree(50, rng);
        auto ch = contour_and_height(t);
        CHECK(ch.contour.values.size() == 99);
        auto back = tree_from_contour(ch.contour.values);
        CHECK(back == t.canonical());
        CHECK(shape(back, back.root()) == shape(t, t.root()));
        auto depth = t.depths();
        for (std::size_t i = 0; i < ch.walk.size(); ++i) CHECK(double(depth[ch.walk[i]]) == ch.contour.values[i]);
    }
    CHECK_THROWS_AS(tree_from_contour({0, 1, 1, 0}), Error);
}

TEST_CASE("coded real tree") {
    const std::size_t k = 64;
    ExcursionFunction tent{1.0 / k, {}};
    for (std::size_t i = 0; i <= k; ++i) tent.values.push_back(std::min(double(i), double(k - i)) / k);
    auto ct = code_real_tree(tent);
    const auto& d = ct.space.space;
    CHECK(d(ct.class_of[0], ct.class_of[k / 2]) == doctest::Approx(0.5));
    CHECK(ct.class_of[0] == ct.class_of[k]);
    CHECK(ct.space.total_mass() == doctest::Approx(1.0));
    CHECK(ct.class_of[k / 4] == ct.class_of[3 * k / 4]);

    // Time stretch by beta and height scaling by alpha give the same tree with
    // metric times alpha and mass over beta.
    Rng rng = stream(82, 0);
    auto f = brownian_excursion(33, rng);
    ExcursionFunction g{f.h * 2.0, {}};
    for (double v : f.values) g.values.push_back(3.0 * v);
    auto tf = code_real_tree(f, 3.0, 1.0), tg = code_real_tree(g);
    REQUIRE(tf.space.size() == tg.space.size());
    Correspondence same_time;
    for (std::size_t i = 0; i < f.values.size(); ++i) same_time.pairs.emplace_back(tf.class_of[i], tg.class_of[i]);
    CHECK(distortion(same_time, tf.space.space, tg.space.space) < 1e-12);
    CHECK(tg.space.total_mass() == doctest::Approx(2.0 * tf.space.total_mass()));
    CHECK_THROWS_AS(code_real_tree(ExcursionFunction{1.0, {0, 0, 0}}), Error);
}

TEST_CASE("tree bounds") {
    PlaneTree edge(std::vector<long>{-1, 0});
    auto b = ghp_tree_bounds(edge, 1.0, 1.0);
    CHECK(b.computed.bound <= 2.5);
    CHECK(b.pass);

    Rng rng = stream(83, 0);
    auto f = brownian_excursion(65, rng);
    auto same = ghp_excursion_bounds(f, f);
    CHECK(same.paper_bound == 0.0);
    CHECK(same.computed.bound <= same.slack + 1e-8);

    auto law = geometric_offspring();
    for (int rep = 0; rep < 30; ++rep) {
        std::size_t n = 1 + std::uniform_int_distribution<std::size_t>(0, 199)(rng);
        auto t = gw_tree_conditioned(law, n, rng);
        auto tb = ghp_tree_bounds(t, 1.0 / std::sqrt(double(n)), 1.0 / double(n));
        CHECK(tb.pass);
    }
}

TEST_CASE("conditioned GW trees") {
    auto law = geometric_offspring();
    Rng rng = stream(84, 0);
    CHECK(gw_tree_conditioned(law, 1, rng) == PlaneTree(std::vector<long>{-1, 0}));
    for (std::size_t n : {0u, 5u, 40u, 300u}) CHECK(gw_tree_conditioned(law, n, rng).size() == n + 1);

    int path = 0, cherry = 0;
    for (int i = 0; i < 10000; ++i) {
        auto t = gw_tree_conditioned(law, 2, rng);
        if (t.children()[t.root()].size() == 2) ++cherry;
        else ++path;
    }
    double chi = std::pow(path - 5000.0, 2) / 5000.0 + std::pow(cherry - 5000.0, 2) / 5000.0;
    CHECK(chi2_sf(chi, 1) > 0.01);
    CHECK_THROWS_AS(gw_tree_conditioned({0.0, 1.0}, 3, rng), Error);
}

TEST_CASE("brownian excursion") {
    Rng rng = stream(85, 0);
    for (int rep = 0; rep < 20; ++rep) {
        auto w = brownian_excursion(257, rng);
        CHECK(w.values.front() == 0.0);
        CHECK(w.values.back() == 0.0);
        CHECK(*std::min_element(w.values.begin(), w.values.end()) > -1e-12);
        CHECK(w.h == doctest::Approx(1.0 / 256));
    }
}

TEST_CASE("brownian excursion maximum agrees with uniform Dyck paths") {
    // Both samplers see the path on a grid, which biases the maximum low. The
    // Dyck height of length 2m has mean sqrt(pi m) - 3/2 + o(1). The excursion
    // is a bridge shifted by its grid minimum, so the grid misses both bridge
    // extremes, each by about 0.5826 sqrt(h).
    const int samples = 10000;
    const std::size_t m = 1000, grid = 8193;
    Rng rng = stream(86, 0);
    double s1 = 0, q1 = 0, s2 = 0, q2 = 0;
    for (int i = 0; i < samples; ++i) {
        auto w = brownian_excursion(grid, rng);
        double v = *std::max_element(w.values.begin(), w.values.end()) + 2.0 * 0.5826 * std::sqrt(w.h);
        s1 += v, q1 += v * v;
        auto steps = dyck_path(m, rng);
        int h = 0, top = 0;
        for (int st : steps) top = std::max(top, h += st);
        double u = (top + 1.5) / std::sqrt(2.0 * m);
        s2 += u, q2 += u * u;
    }
    double m1 = s1 / samples, m2 = s2 / samples;
    double v1 = q1 / samples - m1 * m1, v2 = q2 / samples - m2 * m2;
    double se = std::sqrt(v1 / samples + v2 / samples);
    CHECK(std::fabs(m1 - m2) < 3 * se);
}

TEST_CASE("volume profiles") {
    std::vector<long> star{-1, 0, 0, 0, 0};
    auto v = tree_volume_profile(PlaneTree(star));
    CHECK(v.at(0) == 1.0);
    CHECK(v.at(1) == 2.0);
    CHECK(v.at(2) == 5.0);

    std::vector<long> path{-1};
    for (long i = 1; i < 10; ++i) path.push_back(i - 1);
    auto vp = tree_volume_profile(PlaneTree(path));
    CHECK(vp.at(1) == 2.0);
    CHECK(vp.at(9) == 10.0);
    CHECK(vp.radii.back() == 9.0);
}

TEST_CASE("distinct nodes in contour windows") {
    Rng rng = stream(87, 0);
    auto law = geometric_offspring();
    for (int rep = 0; rep < 200; ++rep) {
        std::size_t n = 10 + rep % 40;
        auto t = rep % 2 ? gw_tree_conditioned(law, n, rng) : random_recursive_tree(n + 1, rng);
        auto ch = contour_and_height(t);
        for (std::size_t m2 = 1; m2 <= 10; ++m2)
            for (std::size_t m1 = 0; m1 + 2 * m2 <= 2 * n; ++m1) {
                auto nodes = window_nodes(ch, m1, m2);
                CHECK(nodes.size() >= m2);
                std::set<std::size_t> in_window;
                for (std::size_t s = m1; s <= m1 + 2 * m2; ++s) in_window.insert(ch.walk[s]);
                std::set<std::size_t> distinct(nodes.begin(), nodes.end());
                CHECK(distinct.size() == nodes.size());
                for (auto x : nodes) CHECK(in_window.count(x) == 1);
            }
    }
}

TEST_CASE("wilson spanning trees") {
    Rng rng = stream(88, 0);
    auto tree_net = random_tree_network(12, rng);
    auto ust = wilson_ust(tree_net, rng);
    std::set<std::pair<std::size_t, std::size_t>> want, got;
    for (const auto& e : tree_net.edges()) want.insert(std::minmax(e.u, e.v));
    for (std::size_t x = 0; x < ust.size(); ++x)
        if (ust.parent()[x] >= 0) got.insert(std::minmax(x, std::size_t(ust.parent()[x])));
    CHECK(want == got);

    auto tri = complete_network(3);
    std::map<std::size_t, int> counts;
    const int samples = 30000;
    for (int i = 0; i < samples; ++i) {
        auto t = wilson_ust(tri, rng);
        // The spanning tree is determined by the missing edge.
        std::set<std::pair<std::size_t, std::size_t>> es;
        for (std::size_t x = 0; x < 3; ++x)
            if (t.parent()[x] >= 0) es.insert(std::minmax(x, std::size_t(t.parent()[x])));
        std::size_t missing = 0;
        if (!es.count({0, 1})) missing = 0;
        else if (!es.count({0, 2})) missing = 1;
        else missing = 2;
        ++counts[missing];
    }
    double chi = 0.0;
    for (std::size_t k = 0; k < 3; ++k) chi += std::pow(counts[k] - samples / 3.0, 2) / (samples / 3.0);
    CHECK(chi2_sf(chi, 2) > 0.01);

    auto torus = torus_network(8, 3);
    auto big = wilson_ust(torus, rng);
    CHECK(big.size() == 512);
    std::size_t edges = 0;
    for (std::size_t x = 0; x < big.size(); ++x) edges += big.parent()[x] >= 0;
    CHECK(edges == 511);
    auto dist = big.distances_from(0);
    CHECK(std::none_of(dist.begin(), dist.end(), [](std::size_t d) { return d > 511; }));
}
