#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "transversal/geometry.hpp"
#include "transversal/rng.hpp"

using namespace trv;

namespace {

Configuration collinear4() {
    return Configuration::from_balls({{"A", {{0, 0, 0}, 1}},
                                      {"B", {{2, 0, 0}, 1}},
                                      {"C", {{4, 0, 0}, 1}},
                                      {"D", {{6, 0, 0}, 1}}});
}

// random rotation from a quaternion sampled on S^3
struct Rotation {
    double m[3][3];
    Vec3 apply(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
};

Rotation random_rotation(Rng& rng) {
    Vec4 q = rng.unit_vec4();
    double w = q[0], x = q[1], y = q[2], z = q[3];
    Rotation r;
    r.m[0][0] = 1 - 2 * (y * y + z * z);
    r.m[0][1] = 2 * (x * y - z * w);
    r.m[0][2] = 2 * (x * z + y * w);
    r.m[1][0] = 2 * (x * y + z * w);
    r.m[1][1] = 1 - 2 * (x * x + z * z);
    r.m[1][2] = 2 * (y * z - x * w);
    r.m[2][0] = 2 * (x * z - y * w);
    r.m[2][1] = 2 * (y * z + x * w);
    r.m[2][2] = 1 - 2 * (x * x + y * y);
    return r;
}

} // namespace

TEST_CASE("dist_point_line basics") {
    Line xaxis = Line::through({0, 0, 0}, {1, 0, 0});
    CHECK(dist_point_line({0, 1, 0}, xaxis) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dist_point_line({5, 0, 0}, xaxis) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dist_point_line({3, 4, 0}, xaxis) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("dist_point_line is rigid-motion invariant") {
    Rng rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        Vec3 p{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        Vec3 a{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        Vec3 d = rng.unit_vec3();
        Line l = Line::through(a, d);
        double before = dist_point_line(p, l);

        Rotation rot = random_rotation(rng);
        Vec3 t{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        Line l2 = Line::through(rot.apply(a) + t, rot.apply(d));
        double after = dist_point_line(rot.apply(p) + t, l2);
        CHECK(std::abs(before - after) < 1e-9);
    }
}

TEST_CASE("line canonical form") {
    Line l = Line::through({3, 1, -2}, {0, 0, -2});
    CHECK(std::abs(l.anchor().dot(l.direction())) < 1e-9);
    CHECK(l.direction().norm() == doctest::Approx(1.0).epsilon(1e-12));
    Line c = l.canonical_unoriented();
    CHECK(c.direction().z == doctest::Approx(1.0));
    // anchor is preserved under flip
    CHECK((c.anchor() - l.anchor()).norm() < 1e-12);
}

TEST_CASE("order_along on collinear centers") {
    Configuration cfg = collinear4();
    CHECK(order_to_string(order_along(cfg, {1, 0, 0})) == "ABCD");
    CHECK(order_to_string(order_along(cfg, {-1, 0, 0})) == "DCBA");
    CHECK_THROWS_AS(order_along(cfg, {0, 0, 1}), TieError);
}

TEST_CASE("order_along reversal property") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<std::string, Ball>> balls;
        for (int i = 0; i < 5; ++i) {
            Vec3 c{rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(-6, 6)};
            balls.push_back({std::string(1, char('A' + i)), {c, 0.1}});
        }
        Configuration cfg = Configuration::from_balls_unchecked(balls);
        Vec3 v = rng.unit_vec3();
        try {
            Order fwd = order_along(cfg, v);
            Order bwd = order_along(cfg, -v);
            std::reverse(bwd.begin(), bwd.end());
            CHECK(fwd == bwd);
        } catch (const TieError&) {
            // measure-zero; skip
        }
    }
}

TEST_CASE("canonicalize") {
    CHECK(canonicalize(order_from_string("ABCD")).str() == "ABCD");
    CHECK(canonicalize(order_from_string("DCBA")).str() == "ABCD");
    CHECK(canonicalize(order_from_string("EDBCA")).str() == "ACBDE");
    // idempotent and reverse-invariant
    Rng rng(99);
    Order o = order_from_string("BDCAE");
    for (int trial = 0; trial < 20; ++trial) {
        GeometricPermutation gp = canonicalize(o);
        CHECK(canonicalize(gp.canonical) == gp);
        Order rev(o.rbegin(), o.rend());
        CHECK(canonicalize(rev) == gp);
        // shuffle o for next round
        for (std::size_t i = o.size(); i > 1; --i)
            std::swap(o[i - 1], o[rng.next_u64() % i]);
    }
}

TEST_CASE("stabbing_order on the collinear configuration") {
    Configuration cfg = collinear4();
    Line x = Line::through({0, 0, 0}, {1, 0, 0});
    CHECK(order_to_string(stabbing_order(cfg, x)) == "ABCD");
    CHECK(order_to_string(stabbing_order(cfg, x.reversed())) == "DCBA");
    Line z = Line::through({0, 0, 0}, {0, 0, 1});
    CHECK_THROWS_AS(stabbing_order(cfg, z), NotATransversal);
}

TEST_CASE("stabbing through a touching point is allowed, tangency there is not") {
    // B and C touch at (3, 0, 0)
    Configuration cfg = Configuration::from_balls(
        {{"B", {{3, 1, 0}, 1}}, {"C", {{3, -1, 0}, 1}}});
    // slope through the touching point: meets both interiors
    Line slanted = Line::through({3, 0, 0}, {1, 0.2, 0});
    CHECK(order_to_string(stabbing_order(cfg, slanted)) == "CB");
    // the x-axis is tangent to both exactly in the common point
    Line x = Line::through({0, 0, 0}, {1, 0, 0});
    CHECK_THROWS_AS(stabbing_order(cfg, x), TieError);
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(Configuration::from_balls({{"A", {{0, 0, 0}, 1}}, {"B", {{1.9, 0, 0}, 1}}}),
                    InvalidInput);
    // touching is allowed
    CHECK_NOTHROW(Configuration::from_balls({{"A", {{0, 0, 0}, 1}}, {"B", {{2, 0, 0}, 1}}}));
    CHECK_THROWS_AS(Configuration::from_balls({{"A", {{0, 0, 0}, 1}}, {"A", {{4, 0, 0}, 1}}}),
                    InvalidInput);
    CHECK_THROWS_AS(Configuration::from_balls({{"A", {{0, 0, 0}, -1}}}), InvalidInput);
    CHECK_THROWS_AS(Configuration::from_balls({{"", {{0, 0, 0}, 1}}}), InvalidInput);
}

TEST_CASE("configuration JSON round trip") {
    Configuration cfg = collinear4();
    std::string text = cfg.to_json(2);
    Configuration back = Configuration::from_json(text);
    REQUIRE(back.size() == cfg.size());
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        CHECK(back.label(i) == cfg.label(i));
        CHECK((back.ball(i).center - cfg.ball(i).center).norm() < 1e-15);
        CHECK(back.ball(i).radius == doctest::Approx(cfg.ball(i).radius));
    }
    CHECK_THROWS_AS(Configuration::from_json("{"), InvalidInput);
    CHECK_THROWS_AS(Configuration::from_json("{\"balls\": [{\"label\": \"A\"}]}"), InvalidInput);
}

TEST_CASE("collinearity detection") {
    CHECK(collinear4().centers_collinear());
    Configuration cfg = Configuration::from_balls(
        {{"A", {{0, 0.5, 0}, 1}}, {"B", {{2, -0.5, 0}, 1}}, {"C", {{4, 0.5, 0}, 1}}});
    CHECK_FALSE(cfg.centers_collinear());
}
