#include "transversal/pinning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "transversal/rng.hpp"

namespace trv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_tangent(const Ball& X, const Line& l, const std::string& what) {
    double d = dist_point_line(X.center, l);
    if (std::abs(d - X.radius) > tol::geom)
        throw NotTangent(what + ": line is not tangent (clearance " +
                         std::to_string(d - X.radius) + ")");
}

} // namespace

LineChart::LineChart(const Line& l) {
    Basis2 basis = perp_basis(l.direction());
    rows_[0] = basis.b1;
    rows_[1] = basis.b2;
    rows_[2] = l.direction();
    origin_ = l.anchor();
}

Vec3 LineChart::to_chart(const Vec3& p) const {
    Vec3 w = p - origin_;
    return {rows_[0].dot(w), rows_[1].dot(w), rows_[2].dot(w)};
}

Vec3 LineChart::from_chart(const Vec3& p) const {
    return origin_ + rows_[0] * p.x + rows_[1] * p.y + rows_[2] * p.z;
}

Line LineChart::from_chart(const Line& l) const {
    Vec3 p = from_chart(l.anchor());
    Vec3 d = rows_[0] * l.direction().x + rows_[1] * l.direction().y + rows_[2] * l.direction().z;
    return Line::through(p, d);
}

Line line_from_coords(const LineCoords4& u) {
    return Line::through({u.u1, u.u2, 0}, {u.u3 - u.u1, u.u4 - u.u2, 1});
}

LineCoords4 coords_from_line(const Line& l) {
    const Vec3& d = l.direction();
    if (std::abs(d.z) < tol::geom)
        throw DegenerateChart("line is parallel to z = const planes");
    const Vec3& a = l.anchor();
    double t0 = -a.z / d.z;
    double t1 = (1.0 - a.z) / d.z;
    Vec3 p0 = a + d * t0;
    Vec3 p1 = a + d * t1;
    return {p0.x, p0.y, p1.x, p1.y};
}

Line ridge(const Ball& X, const Line& l) {
    require_tangent(X, l, "ridge");
    Vec3 foot = l.point_at(l.param_of(X.center));
    Vec3 radial = X.center - foot;
    Vec3 dir = l.direction().cross(radial);
    return Line::through(foot, dir);
}

Screen screen_normal(const Ball& X, const Line& l, const std::string& owner) {
    require_tangent(X, l, "screen_normal");
    LineChart chart(l);
    Vec3 c = chart.to_chart(X.center);
    double rho = std::hypot(c.x, c.y);
    double cx = c.x / rho, cy = c.y / rho;
    double z0 = c.z;
    // lines u meeting the screen satisfy nbar . u >= 0; the outer normal of
    // that halfspace is -nbar
    Vec4 nbar{(1 - z0) * cx, (1 - z0) * cy, z0 * cx, z0 * cy};
    double n = norm4(nbar);
    Screen s;
    s.owner = owner;
    s.ridge = ridge(X, l);
    s.halfspace_normal_4d = {-nbar[0] / n, -nbar[1] / n, -nbar[2] / n, -nbar[3] / n};
    return s;
}

PinningCertificate is_pinned(const Configuration& cfg, const Line& l, double scan_radius,
                             std::int64_t samples, std::uint64_t seed) {
    if (!(scan_radius > 0)) throw InvalidInput("is_pinned: scan_radius must be positive");
    LineChart chart(l);
    std::vector<Vec3> centers;
    std::vector<double> radii;
    centers.reserve(cfg.size());
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const Ball& b = cfg.ball(i);
        double d = dist_point_line(b.center, l);
        if (d > b.radius + tol::geom)
            throw NotATransversal("is_pinned: line misses ball " + cfg.label(i));
        centers.push_back(chart.to_chart(b.center));
        radii.push_back(b.radius);
    }

    PinningCertificate cert;
    cert.scan_radius = scan_radius;
    cert.samples = samples;
    cert.min_constraint_slack = -kInf;
    try {
        cert.order = stabbing_order(cfg, l);
    } catch (const Error&) {
        // degenerate stabbing order (ties); leave empty
    }

    for (std::int64_t i = 0; i < samples; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i) + 1);
        Vec4 s4 = rng.unit_vec4();
        double u1 = scan_radius * s4[0], u2 = scan_radius * s4[1];
        double u3 = scan_radius * s4[2], u4 = scan_radius * s4[3];
        Vec3 p0{u1, u2, 0};
        Vec3 dir{u3 - u1, u4 - u2, 1};
        double dn2 = dir.norm2();
        double margin = kInf;
        for (std::size_t j = 0; j < centers.size(); ++j) {
            Vec3 w = centers[j] - p0;
            double t = w.dot(dir);
            double d2 = w.norm2() - t * t / dn2;
            margin = std::min(margin, radii[j] - std::sqrt(std::max(0.0, d2)));
            if (margin < cert.min_constraint_slack) break; // cannot beat the record
        }
        cert.min_constraint_slack = std::max(cert.min_constraint_slack, margin);
    }
    cert.pinned = cert.min_constraint_slack < -tol::geom;
    return cert;
}

bool certify_pinned(const Configuration& cfg, const Line& l, std::uint64_t seed,
                    std::vector<PinningCertificate>* certificates) {
    bool pinned = true;
    int shell = 0;
    for (double radius : {1e-2, 1e-3, 1e-4}) {
        PinningCertificate c = is_pinned(cfg, l, radius, 10000, seed + 1000 * static_cast<std::uint64_t>(shell++));
        if (!c.pinned) pinned = false;
        if (certificates) certificates->push_back(c);
    }
    return pinned;
}

bool triple_pinning_predicate(const Ball& X, const Ball& Y, const Ball& Z, const Line& l) {
    const Ball* balls[3] = {&X, &Y, &Z};
    Vec3 offsets[3];
    double params[3];
    for (int i = 0; i < 3; ++i) {
        double d = dist_point_line(balls[i]->center, l);
        if (std::abs(d - balls[i]->radius) > tol::geom) return false; // not tangent
        params[i] = l.param_of(balls[i]->center);
        offsets[i] = balls[i]->center - l.point_at(params[i]);
    }
    // coplanarity of the three centers with l: all offsets parallel
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            Vec3 oi = offsets[i].normalized(), oj = offsets[j].normalized();
            if (oi.cross(oj).norm() > tol::geom) return false;
        }
    // separation: the middle ball (in tangency order) sits on the other side
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int a, int b) { return params[a] < params[b]; });
    // coincident tangency points leave no middle ball (and the line would be
    // tangent to two balls in a common point)
    if (params[order[1]] - params[order[0]] < tol::geom ||
        params[order[2]] - params[order[1]] < tol::geom)
        return false;
    Vec3 ref = offsets[order[0]].normalized();
    double s0 = ref.dot(offsets[order[0]]);
    double s1 = ref.dot(offsets[order[1]]);
    double s2 = ref.dot(offsets[order[2]]);
    return s1 * s0 < 0 && s1 * s2 < 0;
}

namespace {

// feasibility probe for bisections: polish from the warm direction, fall back
// to a fresh multistart. Feasibility requires strictly nonnegative depth so
// the bisection's feasible endpoint never sits below the true critical radius.
FindResult probe(const Configuration& cfg, const Order& order, Vec3& warm, std::uint64_t seed,
                 std::int64_t fallback_budget) {
    FindResult r = polish_transversal(cfg, order, warm);
    if ((!r.found() || r.witness->depth < 0) && fallback_budget > 0) {
        FindResult f = find_transversal(cfg, order, fallback_budget, seed);
        if (f.found() && (!r.found() || f.witness->depth > r.witness->depth)) r = f;
    }
    if (r.found()) {
        warm = r.witness->line.direction();
        if (r.witness->depth < 0) r.witness.reset(); // tangency shortfall: infeasible
    }
    return r;
}

} // namespace

ShrinkResult shrink_to_pin(const Configuration& cfg, const Order& order, std::uint64_t seed) {
    double r0;
    if (!cfg.common_radius(&r0) || std::abs(r0 - 1.0) > tol::geom)
        throw InvalidInput("shrink_to_pin expects unit balls");
    if (!is_permutation_of_labels(cfg, order))
        throw InvalidInput("shrink_to_pin: order is not a permutation of the labels");

    FindResult initial = find_transversal(cfg, order, 3000, seed);
    if (!initial.found())
        throw NoInitialTransversal("no certified transversal with order " +
                                   order_to_string(order));

    ShrinkResult out;
    if (cfg.centers_collinear()) {
        out.t_star = 0;
        out.collinear = true;
        std::size_t first = static_cast<std::size_t>(cfg.index_of(order.front()));
        std::size_t last = static_cast<std::size_t>(cfg.index_of(order.back()));
        out.line = Line::through(cfg.ball(first).center,
                                 cfg.ball(last).center - cfg.ball(first).center);
        return out;
    }

    Vec3 warm = initial.witness->line.direction();
    double lo = 0.0, hi = 1.0;
    Line hi_line = initial.witness->line;
    int fresh = 0;
    while (hi - lo > tol::convergence) {
        double mid = 0.5 * (lo + hi);
        FindResult r = probe(cfg.with_radius(mid), order, warm, seed + 100 + static_cast<std::uint64_t>(fresh++), 600);
        if (r.found()) {
            hi = mid;
            hi_line = r.witness->line;
        } else {
            lo = mid;
        }
    }
    out.t_star = hi;
    FindResult polished = polish_transversal(cfg.with_radius(hi), order, warm);
    out.line = polished.found() ? polished.witness->line : hi_line;
    return out;
}

TwoStageResult two_stage_shrink(const Configuration& cfg, const Order& order1,
                                const Order& order2, std::uint64_t seed) {
    if (canonicalize(order1) == canonicalize(order2))
        throw InvalidInput("two_stage_shrink: orders must be distinct geometric permutations");
    FindResult f1 = find_transversal(cfg, order1, 3000, seed);
    if (!f1.found()) throw Infeasible("no transversal with order " + order_to_string(order1));
    FindResult f2 = find_transversal(cfg, order2, 3000, seed + 1);
    if (!f2.found()) throw Infeasible("no transversal with order " + order_to_string(order2));

    ShrinkResult s1 = shrink_to_pin(cfg, order1, seed + 2);
    ShrinkResult s2 = shrink_to_pin(cfg, order2, seed + 3);

    TwoStageResult out;
    out.pinned_first = s1.t_star >= s2.t_star ? 1 : 2;
    const Order& second_order = out.pinned_first == 1 ? order2 : order1;
    const ShrinkResult& first = out.pinned_first == 1 ? s1 : s2;
    out.t1 = first.t_star;
    if (!(out.t1 > tol::geom))
        throw NumericFailure("two_stage_shrink: stage-1 radius collapsed to zero");

    Line sigma1 = first.line;
    Configuration stage1 = cfg.with_radius(out.t1);

    // chord anchors x0 on sigma1 (feet of the centers, inside each ball)
    std::vector<Vec3> anchors;
    std::vector<Vec3> dirs; // c_i - x0_i
    for (std::size_t i = 0; i < stage1.size(); ++i) {
        double t = sigma1.param_of(stage1.ball(i).center);
        Vec3 x0 = sigma1.point_at(t);
        anchors.push_back(x0);
        dirs.push_back(stage1.ball(i).center - x0);
    }
    auto stage2_cfg = [&](double s) {
        std::vector<std::pair<std::string, Ball>> balls;
        for (std::size_t i = 0; i < stage1.size(); ++i)
            balls.push_back({stage1.label(i), {anchors[i] + dirs[i] * s, s * out.t1}});
        return Configuration::from_balls_unchecked(std::move(balls));
    };

    Vec3 warm = (out.pinned_first == 1 ? s2 : s1).line.direction();
    double lo = 0.0, hi = 1.0;
    Line sigma2;
    {
        FindResult top = probe(stage2_cfg(1.0), second_order, warm, seed + 10, 1500);
        if (!top.found())
            throw NumericFailure("two_stage_shrink: second order lost at stage-1 radius");
        sigma2 = top.witness->line;
    }
    int fresh = 0;
    while ((hi - lo) * out.t1 > tol::convergence) {
        double mid = 0.5 * (lo + hi);
        FindResult r = probe(stage2_cfg(mid), second_order, warm, seed + 20 + static_cast<std::uint64_t>(fresh++), 600);
        if (r.found()) {
            hi = mid;
            sigma2 = r.witness->line;
        } else {
            lo = mid;
        }
    }
    out.t2 = hi * out.t1;

    // rescale the stage-2 configuration back to unit radius
    double k = 1.0 / out.t2;
    Configuration final_small = stage2_cfg(hi);
    std::vector<std::pair<std::string, Ball>> balls;
    for (std::size_t i = 0; i < final_small.size(); ++i)
        balls.push_back({final_small.label(i), {final_small.ball(i).center * k, 1.0}});
    out.cfg = Configuration::from_balls(std::move(balls));
    Line line_first = Line::through(sigma1.anchor() * k, sigma1.direction());
    Line line_second = Line::through(sigma2.anchor() * k, sigma2.direction());
    out.line1 = out.pinned_first == 1 ? line_first : line_second;
    out.line2 = out.pinned_first == 1 ? line_second : line_first;
    // rescaling magnifies the bisection's absolute tangency slack; polish both
    // lines against the final unit configuration
    FindResult p1 = polish_transversal(out.cfg, order1, out.line1.direction());
    if (p1.found()) out.line1 = p1.witness->line;
    FindResult p2 = polish_transversal(out.cfg, order2, out.line2.direction());
    if (p2.found()) out.line2 = p2.witness->line;
    return out;
}

std::string to_string(PinningClass c) {
    switch (c) {
        case PinningClass::hyperboloidal: return "hyperboloidal";
        case PinningClass::coplanar_ridges: return "coplanar_ridges";
        case PinningClass::concurrent_ridges: return "concurrent_ridges";
        case PinningClass::not_minimal: return "not_minimal";
        case PinningClass::not_pinning: return "not_pinning";
    }
    return "?";
}

ClassifyResult classify_minimal_pinning(const Configuration& cfg, const Line& l) {
    if (cfg.size() != 4) throw InvalidInput("classify_minimal_pinning expects four balls");
    for (std::size_t i = 0; i < 4; ++i)
        require_tangent(cfg.ball(i), l, "classify(" + cfg.label(i) + ")");

    ClassifyResult out{};
    out.cls = PinningClass::not_pinning;

    // tangency order along l
    std::array<std::size_t, 4> idx{0, 1, 2, 3};
    std::array<double, 4> params{};
    for (std::size_t i = 0; i < 4; ++i) params[i] = l.param_of(cfg.ball(i).center);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return params[a] < params[b]; });
    for (std::size_t i : idx) out.tangency_order.push_back(cfg.label(i));

    // a pinned triple makes the four-ball pinning non-minimal
    for (std::size_t skip = 0; skip < 4; ++skip) {
        std::array<const Ball*, 3> tri{};
        std::size_t k = 0;
        for (std::size_t i = 0; i < 4; ++i)
            if (i != skip) tri[k++] = &cfg.ball(i);
        if (triple_pinning_predicate(*tri[0], *tri[1], *tri[2], l)) {
            out.cls = PinningClass::not_minimal;
            return out;
        }
    }

    LineChart chart(l);
    Eigen::Matrix4d N;
    std::array<double, 4> zs{};
    std::array<Vec2, 4> radial{};
    for (std::size_t i = 0; i < 4; ++i) {
        Screen s = screen_normal(cfg.ball(i), l, cfg.label(i));
        for (std::size_t j = 0; j < 4; ++j)
            N(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s.halfspace_normal_4d[j];
        Vec3 c = chart.to_chart(cfg.ball(i).center);
        zs[i] = c.z;
        double rho = std::hypot(c.x, c.y);
        radial[i] = {c.x / rho, c.y / rho};
    }

    Eigen::JacobiSVD<Eigen::Matrix4d> svd(N, Eigen::ComputeFullV);
    Eigen::Vector4d sv = svd.singularValues();
    for (Eigen::Index i = 0; i < 4; ++i) out.singular_values[static_cast<std::size_t>(i)] = sv(i);
    int rank = 0;
    for (Eigen::Index i = 0; i < 4; ++i)
        if (sv(i) > tol::rank * sv(0)) ++rank;

    if (rank == 4) {
        out.cls = PinningClass::not_pinning;
        return out;
    }

    // minimal dependencies among subsets
    auto subset_dependent = [&](const std::vector<Eigen::Index>& rows) {
        Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), 4);
        for (std::size_t r = 0; r < rows.size(); ++r) M.row(static_cast<Eigen::Index>(r)) = N.row(rows[r]);
        Eigen::JacobiSVD<Eigen::MatrixXd> s(M);
        auto v = s.singularValues();
        return v(v.size() - 1) <= tol::rank * std::max(v(0), 1e-300);
    };

    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = i + 1; j < 4; ++j)
            if (subset_dependent({i, j})) {
                out.cls = PinningClass::concurrent_ridges; // equal ridges
                return out;
            }
    for (Eigen::Index skip = 0; skip < 4; ++skip) {
        std::vector<Eigen::Index> rows;
        for (Eigen::Index i = 0; i < 4; ++i)
            if (i != skip) rows.push_back(i);
        if (subset_dependent(rows)) {
            // three ridges coplanar with l (concurrency needs coincident
            // tangency points, ruled out above via dependent pairs)
            out.cls = PinningClass::coplanar_ridges;
            return out;
        }
    }

    // all four minimally dependent: ridges in hyperboloidal configuration;
    // the null vector spans the R^4 line of transversals to the four ridges
    out.cls = PinningClass::hyperboloidal;
    Eigen::Vector4d u0 = svd.matrixV().col(3);
    auto quadric_normal = [&](double z) {
        double a = (1 - z) * u0(0) + z * u0(2);
        double b = (1 - z) * u0(1) + z * u0(3);
        return Vec2{-b, a};
    };
    std::vector<int> signs;
    bool degenerate = false;
    for (std::size_t i : idx) {
        Vec2 nq = quadric_normal(zs[i]);
        double dotv = nq.x * radial[i].x + nq.y * radial[i].y;
        if (std::abs(dotv) < 1e-12) degenerate = true;
        signs.push_back(dotv > 0 ? 1 : (dotv < 0 ? -1 : 0));
    }
    // the null vector's overall sign is arbitrary; orient so the first
    // tangency's side is positive
    if (!signs.empty() && signs[0] < 0)
        for (int& s : signs) s = -s;
    out.side_signs = signs;
    out.alternating = !degenerate;
    for (std::size_t i = 0; i + 1 < signs.size(); ++i)
        if (signs[i] * signs[i + 1] >= 0) out.alternating = false;
    return out;
}

HyperboloidalResult make_hyperboloidal(const HyperboloidalParams& p) {
    for (double t : p.t)
        if (std::abs(1.0 - t * t) < tol::geom)
            throw DegenerateParameter("hyperboloidal parameter t with 1 - t^2 ~ 0");
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (std::abs(p.t[i] - p.t[j]) < 1e-12)
                throw DegenerateParameter("hyperboloidal parameters must be pairwise distinct");

    HyperboloidalResult out;
    std::vector<std::pair<std::string, Ball>> balls;
    const char* labels[4] = {"A", "B", "C", "D"};
    for (std::size_t i = 0; i < 4; ++i) {
        double t = p.t[i];
        Vec3 c{2 * p.h * t / (1 - t * t), (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)};
        balls.push_back({labels[i], {c, 1.0}});
    }
    out.cfg = Configuration::from_balls_unchecked(std::move(balls));
    out.line = Line::through({0, 0, 0}, {1, 0, 0});
    for (std::size_t i = 0; i < 4; ++i) {
        double d = dist_point_line(out.cfg.ball(i).center, out.line);
        if (std::abs(d - 1.0) > tol::geom) out.tangent_ok = false;
    }
    out.non_overlapping = out.cfg.non_overlapping();
    return out;
}

} // namespace trv
