#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "transversal/rng.hpp"
#include "transversal/solver.hpp"

using namespace trv;

namespace {

Configuration collinear4() {
    return Configuration::from_balls({{"A", {{0, 0, 0}, 1}},
                                      {"B", {{2, 0, 0}, 1}},
                                      {"C", {{4, 0, 0}, 1}},
                                      {"D", {{6, 0, 0}, 1}}});
}

// three unit disks in the z = 0 plane admitting the order ACB along +x
Configuration triangle3() {
    return Configuration::from_balls(
        {{"A", {{0, 0, 0}, 1}}, {"B", {{2.2, 0, 0}, 1}}, {"C", {{1.1, 1.85, 0}, 1}}});
}

// five unit disks with B and C touching; geometric permutations ABCDE and ACBDE
Configuration five_disks() {
    return Configuration::from_balls({{"A", {{0, 0, 0}, 1}},
                                      {"B", {{3, 1, 0}, 1}},
                                      {"C", {{3, -1, 0}, 1}},
                                      {"D", {{6, 0, 0}, 1}},
                                      {"E", {{8.2, 0, 0}, 1}}});
}

std::vector<std::string> gp_strings(const EnumerationResult& r) {
    std::vector<std::string> out;
    for (const auto& gp : r.gps) out.push_back(gp.str());
    return out;
}

} // namespace

TEST_CASE("project_centers") {
    Configuration cfg = collinear4();
    auto along = project_centers(cfg, {1, 0, 0});
    for (const auto& p : along) CHECK((p - along[0]).norm() < 1e-12);

    auto across = project_centers(cfg, {0, 0, 1});
    REQUIRE(across.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(across[i].x == doctest::Approx(2.0 * i).epsilon(1e-12));
        CHECK(across[i].y == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("projections contract pairwise distances") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<std::string, Ball>> balls;
        for (int i = 0; i < 6; ++i)
            balls.push_back({std::string(1, char('A' + i)),
                             {{rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(-6, 6)}, 0.1}});
        Configuration cfg = Configuration::from_balls_unchecked(balls);
        Vec3 v = rng.unit_vec3();
        auto pts = project_centers(cfg, v);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                double d2 = (pts[i] - pts[j]).norm();
                double d3 = (cfg.ball(i).center - cfg.ball(j).center).norm();
                CHECK(d2 <= d3 + 1e-9);
            }
    }
}

TEST_CASE("smallest enclosing circle basics") {
    std::vector<Vec2> one{{3, 4}};
    CHECK(smallest_enclosing_circle(one).radius == doctest::Approx(0.0));

    std::vector<Vec2> pair{{0, 0}, {2, 0}};
    Circle2 c = smallest_enclosing_circle(pair);
    CHECK(c.center.x == doctest::Approx(1.0));
    CHECK(c.center.y == doctest::Approx(0.0));
    CHECK(c.radius == doctest::Approx(1.0));

    // equilateral triangle with side 2: circumradius 2/sqrt(3)
    std::vector<Vec2> tri{{0, 0}, {2, 0}, {1, std::sqrt(3.0)}};
    CHECK(smallest_enclosing_circle(tri).radius ==
          doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("smallest enclosing circle contains all points and touches some") {
    Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + static_cast<int>(rng.next_u64() % 30);
        std::vector<Vec2> pts;
        for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
        Circle2 c = smallest_enclosing_circle(pts);
        double maxd = 0;
        for (const auto& p : pts) maxd = std::max(maxd, (p - c.center).norm());
        CHECK(maxd <= c.radius + 1e-9);   // containment
        CHECK(maxd >= c.radius - 1e-7);   // minimality: some point on the boundary
    }
}

TEST_CASE("depth on the collinear configuration") {
    Configuration cfg = collinear4();
    CHECK(depth(cfg, {1, 0, 0}).depth == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(depth(cfg, {0, 0, 1}).depth == doctest::Approx(-2.0).epsilon(1e-12));
    double s = 1.0 / std::sqrt(2.0);
    // oracle: centers project collinearly with spacing sqrt(2), SEC radius 3*sqrt(2)/2
    CHECK(depth(cfg, {s, s, 0}).depth ==
          doctest::Approx(1.0 - 3.0 * std::sqrt(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("depth requires congruent radii") {
    Configuration cfg = Configuration::from_balls({{"A", {{0, 0, 0}, 1}}, {"B", {{4, 0, 0}, 2}}});
    CHECK_THROWS_AS(depth(cfg, {1, 0, 0}), MixedRadii);
}

TEST_CASE("depth symmetry and rigid-motion invariance") {
    Rng rng(77);
    Configuration cfg = five_disks();
    for (int trial = 0; trial < 60; ++trial) {
        Vec3 v = rng.unit_vec3();
        CHECK(depth(cfg, v).depth == doctest::Approx(depth(cfg, -v).depth).epsilon(1e-12));
    }
    // translation invariance (rotations exercised via dist_point_line elsewhere)
    Vec3 t{1.5, -2.25, 0.75};
    Configuration moved = cfg.transformed(t);
    for (int trial = 0; trial < 30; ++trial) {
        Vec3 v = rng.unit_vec3();
        CHECK(std::abs(depth(cfg, v).depth - depth(moved, v).depth) < 1e-9);
    }
}

TEST_CASE("depth monotonicity under radius shrink") {
    Configuration cfg = five_disks();
    Rng rng(123);
    for (int trial = 0; trial < 40; ++trial) {
        Vec3 v = rng.unit_vec3();
        double delta = rng.uniform(0.05, 0.6);
        double full = depth(cfg, v).depth;
        double shrunk = depth(cfg.with_radius(1.0 - delta), v).depth;
        CHECK(shrunk == doctest::Approx(full - delta).epsilon(1e-10));
    }
}

TEST_CASE("find_transversal on the collinear configuration") {
    Configuration cfg = collinear4();
    FindResult r = find_transversal(cfg, order_from_string("ABCD"), 500, 1);
    REQUIRE(r.found());
    CHECK(r.witness->depth == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(r.witness->line.direction().x) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(order_to_string(stabbing_order(cfg, r.witness->line)) == "ABCD");

    FindResult miss = find_transversal(cfg, order_from_string("ACBD"), 500, 1);
    CHECK_FALSE(miss.found());
    CHECK_FALSE(miss.order_matched); // no direction ever sorts collinear centers as ACBD
}

TEST_CASE("find_transversal finds the order ACB on three disks") {
    Configuration cfg = triangle3();
    FindResult r = find_transversal(cfg, order_from_string("ACB"), 400, 3);
    REQUIRE(r.found());
    CHECK(order_to_string(stabbing_order(cfg, r.witness->line)) == "ACB");
    CHECK(r.witness->depth > 0);
}

TEST_CASE("witnesses re-validate against the stabbing predicate") {
    Rng rng(2024);
    Configuration cfg = five_disks();
    for (const char* os : {"ABCDE", "ACBDE"}) {
        FindResult r = find_transversal(cfg, order_from_string(os), 600, 5);
        REQUIRE(r.found());
        CHECK(order_to_string(stabbing_order(cfg, r.witness->line)) == os);
    }
}

TEST_CASE("enumerate on the collinear configuration") {
    EnumerationResult r = enumerate_geometric_permutations(collinear4(), 20000, 42, 2);
    CHECK(gp_strings(r) == std::vector<std::string>{"ABCD"});
    REQUIRE(r.certificates.size() == 1);
    CHECK(r.certificates[0].depth > 0.99);
}

TEST_CASE("enumerate the five-disk configuration") {
    EnumerationResult r = enumerate_geometric_permutations(five_disks(), 200000, 42, 2);
    CHECK(gp_strings(r) == std::vector<std::string>{"ABCDE", "ACBDE"});
}

TEST_CASE("three disks can realize three geometric permutations") {
    Configuration cfg = Configuration::from_balls(
        {{"A", {{0, 0, 0}, 1}}, {"B", {{2.2, 0, 0}, 1}}, {"C", {{1.1, 1.9052558883, 0}, 1}}});
    EnumerationResult r = enumerate_geometric_permutations(cfg, 100000, 9, 2);
    CHECK(gp_strings(r) == std::vector<std::string>{"ABC", "ACB", "BAC"});
}

TEST_CASE("enumerate is deterministic across thread counts") {
    Configuration cfg = five_disks();
    EnumerationResult a = enumerate_geometric_permutations(cfg, 30000, 11, 1);
    EnumerationResult b = enumerate_geometric_permutations(cfg, 30000, 11, 2);
    REQUIRE(gp_strings(a) == gp_strings(b));
    REQUIRE(a.certificates.size() == b.certificates.size());
    for (std::size_t i = 0; i < a.certificates.size(); ++i) {
        CHECK(a.certificates[i].depth == b.certificates[i].depth);
        CHECK(a.certificates[i].line.deviation(b.certificates[i].line) == 0.0);
    }
}

TEST_CASE("enumerate rejects tiny resolutions") {
    CHECK_THROWS_AS(enumerate_geometric_permutations(collinear4(), 100, 1, 1), InvalidInput);
}
