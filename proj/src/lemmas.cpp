#include "transversal/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "transversal/rng.hpp"

namespace trv {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_label_order(const Configuration& cfg, const Line& l) {
    Order got = stabbing_order(cfg, l); // throws NotATransversal / TieError
    if (got != cfg.labels())
        throw WrongOrder("line stabs in order " + order_to_string(got) + ", expected " +
                         order_to_string(cfg.labels()));
}

double center_dist(const Configuration& cfg, std::size_t i, std::size_t j) {
    return (cfg.ball(i).center - cfg.ball(j).center).norm();
}

} // namespace

DistanceLemmaReport check_distance_lemma(const Configuration& cfg, const Line& l) {
    if (cfg.size() != 4) throw InvalidInput("check_distance_lemma expects exactly four balls");
    require_label_order(cfg, l);
    DistanceLemmaReport rep;
    rep.ad = center_dist(cfg, 0, 3);
    rep.ab = center_dist(cfg, 0, 1);
    rep.bc = center_dist(cfg, 1, 2);
    rep.cd = center_dist(cfg, 2, 3);
    rep.margin = rep.ad - std::max({rep.ab, rep.bc, rep.cd});
    rep.holds = rep.margin > 0;
    return rep;
}

DistanceLemmaReport check_distance_lemma3(const Configuration& cfg, const Line& l) {
    if (cfg.size() != 3) throw InvalidInput("check_distance_lemma3 expects exactly three balls");
    require_label_order(cfg, l);
    DistanceLemmaReport rep;
    rep.ad = center_dist(cfg, 0, 2); // the extreme pair of three
    rep.ab = center_dist(cfg, 0, 1);
    rep.bc = center_dist(cfg, 1, 2);
    rep.cd = rep.bc;
    rep.margin = rep.ad - std::max(rep.ab, rep.bc);
    rep.holds = rep.margin > 0;
    return rep;
}

namespace {

using Pair = std::set<char>;

Pair extreme(const std::string& o) { return {o.front(), o.back()}; }

std::set<Pair> consecutive(const std::string& o) {
    std::set<Pair> out;
    for (std::size_t i = 0; i + 1 < o.size(); ++i) out.insert({o[i], o[i + 1]});
    return out;
}

// the distance lemma makes sigma and tau jointly contradictory iff each one's
// extreme pair is a consecutive pair of the other
bool incompatible(const std::string& s, const std::string& t) {
    return consecutive(t).count(extreme(s)) > 0 && consecutive(s).count(extreme(t)) > 0;
}

} // namespace

IncompatibilityGraph build_incompatibility_graph() {
    IncompatibilityGraph g;
    std::string letters = "ABCD";
    std::set<std::string> seen;
    std::string perm = letters;
    std::sort(perm.begin(), perm.end());
    do {
        std::string rev(perm.rbegin(), perm.rend());
        seen.insert(std::min(perm, rev));
    } while (std::next_permutation(perm.begin(), perm.end()));
    g.vertices.assign(seen.begin(), seen.end());

    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        for (std::size_t j = i + 1; j < g.vertices.size(); ++j)
            if (incompatible(g.vertices[i], g.vertices[j]))
                g.edges.emplace_back(g.vertices[i], g.vertices[j]);

    const std::string abcd = "ABCD";
    for (const auto& v : g.vertices) {
        if (v == abcd) continue;
        if (incompatible(abcd, v))
            g.abcd_excluded.push_back(v);
        else
            g.abcd_compatible.push_back(v);
    }
    for (const auto& [a, b] : g.edges) {
        bool a_in = std::find(g.abcd_compatible.begin(), g.abcd_compatible.end(), a) !=
                    g.abcd_compatible.end();
        bool b_in = std::find(g.abcd_compatible.begin(), g.abcd_compatible.end(), b) !=
                    g.abcd_compatible.end();
        if (a_in && b_in) g.edges_restricted.emplace_back(a, b);
    }

    // independence number on the 7 by exhaustive subset search
    int n = static_cast<int>(g.abcd_compatible.size());
    auto adj = [&](int a, int b) {
        return incompatible(g.abcd_compatible[static_cast<std::size_t>(a)],
                            g.abcd_compatible[static_cast<std::size_t>(b)]);
    };
    int best = 0;
    for (int mask = 0; mask < (1 << n); ++mask) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            if (mask & (1 << a))
                for (int b = a + 1; b < n && ok; ++b)
                    if ((mask & (1 << b)) && adj(a, b)) ok = false;
        if (ok) best = std::max(best, __builtin_popcount(static_cast<unsigned>(mask)));
    }
    g.independence_number = best;
    return g;
}

AngleLemmaReport check_angle_lemma(const Ball& A, const Ball& B, const Ball& C, const Line& l) {
    Configuration cfg = Configuration::from_balls_unchecked(
        {{"A", A}, {"B", B}, {"C", C}});
    Order got = stabbing_order(cfg, l);
    if (got != cfg.labels())
        throw WrongOrder("line stabs in order " + order_to_string(got) + ", expected ABC");
    Vec3 ac = C.center - A.center;
    double cosang = l.direction().dot(ac) / ac.norm();
    AngleLemmaReport rep;
    rep.angle = std::acos(std::clamp(cosang, -1.0, 1.0));
    rep.holds = rep.angle < kPi / 4 + tol::geom;
    return rep;
}

namespace {

double triangle_angle(const Vec3& at, const Vec3& p, const Vec3& q) {
    Vec3 u = p - at, v = q - at;
    return std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0));
}

} // namespace

TriangleLemmaReport check_triangle_lemmas(const Ball& X, const Ball& Y, const Ball& Z,
                                          const std::optional<Line>& witness_xyz,
                                          const std::optional<Line>& witness_xzy) {
    Configuration cfg = Configuration::from_balls_unchecked({{"X", X}, {"Y", Y}, {"Z", Z}});
    TriangleLemmaReport rep;
    if (witness_xyz) {
        Order got = stabbing_order(cfg, *witness_xyz);
        if (got != order_from_string("XYZ"))
            throw WrongOrder("first witness stabs " + order_to_string(got) + ", expected XYZ");
        rep.has_xyz = true;
    }
    if (witness_xzy) {
        Order got = stabbing_order(cfg, *witness_xzy);
        if (got != order_from_string("XZY"))
            throw WrongOrder("second witness stabs " + order_to_string(got) + ", expected XZY");
        rep.has_xzy = true;
    }
    if (!rep.has_xyz && !rep.has_xzy) throw InvalidInput("at least one witness line is required");

    rep.angle_x = triangle_angle(X.center, Y.center, Z.center);
    rep.angle_y = triangle_angle(Y.center, X.center, Z.center);
    rep.angle_z = triangle_angle(Z.center, X.center, Y.center);
    rep.acute_x = rep.angle_x < kPi / 2;
    rep.acute_y = rep.angle_y < kPi / 2;
    rep.acute_z = rep.angle_z < kPi / 2;
    rep.yz = (Y.center - Z.center).norm();
    rep.yz_bound = 2.0 * std::sqrt(2.0);
    rep.yz_ok = rep.yz < rep.yz_bound;
    return rep;
}

namespace {

struct OffsetInterval {
    double lo, hi;
};

// common offset interval of all disks along the normal of direction theta
OffsetInterval common_interval(const std::vector<Disk2>& disks, double theta) {
    Vec2 n{-std::sin(theta), std::cos(theta)};
    double lo = -1e300, hi = 1e300;
    for (const auto& d : disks) {
        double c = d.center.dot(n);
        lo = std::max(lo, c - d.radius);
        hi = std::min(hi, c + d.radius);
    }
    return {lo, hi};
}

std::vector<std::size_t> disk_order(const std::vector<Disk2>& disks, const Vec2& dir) {
    std::vector<std::size_t> idx(disks.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return disks[a].center.dot(dir) < disks[b].center.dot(dir);
    });
    return idx;
}

} // namespace

Line2 interior_transversal_2d(const std::vector<Disk2>& disks, const Line2& l1, const Line2& l2) {
    if (disks.empty()) throw InvalidInput("interior_transversal_2d: no disks");
    for (const Line2& l : {l1, l2}) {
        Vec2 n{-l.dir.y, l.dir.x};
        double off = l.point.dot(n);
        for (const auto& d : disks)
            if (std::abs(d.center.dot(n) - off) > d.radius + tol::geom)
                throw InvalidInput("interior_transversal_2d: input line is not a transversal");
    }
    double th1 = std::atan2(l1.dir.y, l1.dir.x);
    double th2 = std::atan2(l2.dir.y, l2.dir.x);
    // same line?
    {
        Vec2 n1{-l1.dir.y, l1.dir.x};
        bool same_dir = std::abs(l1.dir.dot(l2.dir)) > 1.0 - 1e-12;
        bool same_off = std::abs(l1.point.dot(n1) - l2.point.dot(n1)) < 1e-12;
        if (same_dir && same_off) throw InvalidInput("interior_transversal_2d: l1 equals l2");
    }
    if (disk_order(disks, l1.dir) != disk_order(disks, l2.dir))
        throw InvalidInput("interior_transversal_2d: the two lines realize different orders");

    auto build = [&](double theta, double offset) {
        Vec2 dir{std::cos(theta), std::sin(theta)};
        Vec2 n{-dir.y, dir.x};
        return Line2{n * offset, dir};
    };

    // candidate angles: the short arc between the two directions
    double dth = th2 - th1;
    while (dth > kPi) dth -= 2 * kPi;
    while (dth < -kPi) dth += 2 * kPi;
    double best_w = -1e300, best_theta = th1;
    const int kGrid = 2001;
    for (int i = 0; i < kGrid; ++i) {
        double theta = th1 + dth * static_cast<double>(i) / (kGrid - 1);
        OffsetInterval iv = common_interval(disks, theta);
        double w = iv.hi - iv.lo;
        if (w > best_w) {
            best_w = w;
            best_theta = theta;
        }
    }
    // local refinement around the best angle
    double step = std::max(std::abs(dth), 1e-3) / (kGrid - 1);
    while (step > 1e-14) {
        bool improved = false;
        for (double cand : {best_theta - step, best_theta + step}) {
            OffsetInterval iv = common_interval(disks, cand);
            if (iv.hi - iv.lo > best_w) {
                best_w = iv.hi - iv.lo;
                best_theta = cand;
                improved = true;
            }
        }
        if (!improved) step *= 0.5;
    }

    if (best_w <= tol::geom)
        throw NumericFailure("interior_transversal_2d: no positive-width direction found");
    OffsetInterval iv = common_interval(disks, best_theta);
    Line2 result = build(best_theta, 0.5 * (iv.lo + iv.hi));

    // validate: strictly interior and same order
    Vec2 n{-result.dir.y, result.dir.x};
    double off = result.point.dot(n);
    for (const auto& d : disks)
        if (std::abs(d.center.dot(n) - off) >= d.radius)
            throw NumericFailure("interior_transversal_2d: clearance validation failed");
    if (disk_order(disks, result.dir) != disk_order(disks, l1.dir))
        throw NumericFailure("interior_transversal_2d: order validation failed");
    return result;
}

Configuration random_configuration_box(int n, double box_side, std::uint64_t seed,
                                       int max_attempts) {
    if (n < 1) throw InvalidInput("random_configuration_box: n must be >= 1");
    Rng rng(seed);
    std::vector<std::pair<std::string, Ball>> balls;
    double half = box_side / 2;
    int attempts = 0;
    while (static_cast<int>(balls.size()) < n) {
        if (++attempts > max_attempts)
            throw NumericFailure("random_configuration_box: rejection sampling exhausted");
        Vec3 c{rng.uniform(-half, half), rng.uniform(-half, half), rng.uniform(-half, half)};
        bool ok = true;
        for (const auto& [label, b] : balls)
            if ((b.center - c).norm() < 2.0) {
                ok = false;
                break;
            }
        if (!ok) continue;
        balls.push_back({std::string(1, char('A' + balls.size())), {c, 1.0}});
    }
    return Configuration::from_balls(std::move(balls));
}

CertifiedInstance random_order_instance(int n, std::uint64_t seed) {
    if (n < 1 || n > 26) throw InvalidInput("random_order_instance: n must be in [1, 26]");
    Rng rng(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        // stabbing parameters with gaps >= 2.05 and offsets < 0.95
        std::vector<double> t(static_cast<std::size_t>(n));
        double cur = 0;
        for (int i = 0; i < n; ++i) {
            t[static_cast<std::size_t>(i)] = cur;
            cur += rng.uniform(2.05, 4.0);
        }
        // random rigid motion
        Vec3 dir = rng.unit_vec3();
        Basis2 basis = perp_basis(dir);
        Vec3 origin{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        std::vector<std::pair<std::string, Ball>> balls;
        for (int i = 0; i < n; ++i) {
            double rho = 0.95 * std::sqrt(rng.next_double());
            double phi = rng.uniform(0, 2 * kPi);
            Vec3 c = origin + dir * t[static_cast<std::size_t>(i)] +
                     basis.b1 * (rho * std::cos(phi)) + basis.b2 * (rho * std::sin(phi));
            balls.push_back({std::string(1, char('A' + i)), {c, 1.0}});
        }
        CertifiedInstance inst{Configuration::from_balls(std::move(balls)),
                               Line::through(origin, dir)};
        try {
            if (stabbing_order(inst.cfg, inst.line) == inst.cfg.labels()) return inst;
        } catch (const Error&) {
        }
        rng.next_u64(); // perturb the stream and retry
    }
    throw NumericFailure("random_order_instance: failed to certify an instance");
}

} // namespace trv
