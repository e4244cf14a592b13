#include "transversal/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "transversal/parallel.hpp"
#include "transversal/rng.hpp"

namespace trv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool contains(const Circle2& c, const Vec2& p, double slack) {
    return (p - c.center).norm2() <= c.radius * c.radius + slack;
}

Circle2 circle_two(const Vec2& a, const Vec2& b) {
    Vec2 c = (a + b) * 0.5;
    return {c, 0.5 * (a - b).norm()};
}

// circumcircle; falls back to the best diameter circle when nearly collinear
Circle2 circle_three(const Vec2& a, const Vec2& b, const Vec2& c) {
    Vec2 ab = b - a, ac = c - a;
    double d = 2.0 * (ab.x * ac.y - ab.y * ac.x);
    double scale = std::max({ab.norm2(), ac.norm2(), (b - c).norm2()});
    if (std::abs(d) > 1e-14 * scale) {
        double ab2 = ab.norm2(), ac2 = ac.norm2();
        Vec2 center{a.x + (ac.y * ab2 - ab.y * ac2) / d, a.y + (ab.x * ac2 - ac.x * ab2) / d};
        return {center, (center - a).norm()};
    }
    Circle2 best = circle_two(a, b);
    for (const Circle2& cand : {circle_two(a, c), circle_two(b, c)})
        if (cand.radius > best.radius) best = cand;
    return best;
}

Circle2 welzl(std::vector<Vec2>& pts, std::size_t n, std::vector<Vec2>& boundary) {
    if (n == 0 || boundary.size() == 3) {
        switch (boundary.size()) {
            case 0: return {{0, 0}, -1.0};
            case 1: return {boundary[0], 0.0};
            case 2: return circle_two(boundary[0], boundary[1]);
            default: return circle_three(boundary[0], boundary[1], boundary[2]);
        }
    }
    Circle2 c = welzl(pts, n - 1, boundary);
    const Vec2 p = pts[n - 1];
    double slack = 1e-12 * std::max(1.0, c.radius * c.radius);
    if (c.radius >= 0 && contains(c, p, slack)) return c;
    boundary.push_back(p);
    c = welzl(pts, n - 1, boundary);
    boundary.pop_back();
    // move-to-front keeps the expected recursion depth low
    std::rotate(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(n - 1),
                pts.begin() + static_cast<std::ptrdiff_t>(n));
    return c;
}

// SEC on a scratch copy (welzl reorders)
Circle2 sec_scratch(std::vector<Vec2>& scratch) {
    if (scratch.empty()) throw InvalidInput("smallest_enclosing_circle: empty point set");
    std::vector<Vec2> boundary;
    boundary.reserve(3);
    Circle2 c = welzl(scratch, scratch.size(), boundary);
    if (c.radius < 0) c = {scratch[0], 0.0};
    return c;
}

// Flat view of a configuration for the hot sweep path.
struct FlatConfig {
    std::vector<Vec3> centers;
    std::vector<Vec3> diffs;       // c_i - c_j for i < j
    std::vector<double> diff_gap2; // |c_i - c_j|^2 - (2r)^2
    double radius = 1.0;
    std::size_t n = 0;

    explicit FlatConfig(const Configuration& cfg) {
        double r;
        if (!cfg.common_radius(&r)) throw MixedRadii("depth requires congruent radii");
        radius = r;
        n = cfg.size();
        centers.reserve(n);
        for (std::size_t i = 0; i < n; ++i) centers.push_back(cfg.ball(i).center);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                diffs.push_back(centers[i] - centers[j]);
                diff_gap2.push_back(diffs.back().norm2() - 4.0 * r * r);
            }
    }

    // quick reject: direction v admits a transversal only if every projected
    // pair distance is < 2r, i.e. (v . diff)^2 > |diff|^2 - 4r^2
    bool pairs_feasible(const Vec3& v) const {
        for (std::size_t k = 0; k < diffs.size(); ++k) {
            double t = v.dot(diffs[k]);
            if (t * t <= diff_gap2[k]) return false;
        }
        return true;
    }
};

// depth + SEC center, on preallocated scratch
DepthResult depth_flat(const FlatConfig& fc, const Vec3& v, std::vector<Vec2>& scratch) {
    Basis2 basis = perp_basis(v);
    scratch.clear();
    for (const Vec3& c : fc.centers) scratch.emplace_back(c.dot(basis.b1), c.dot(basis.b2));
    Circle2 sec = sec_scratch(scratch);
    DepthResult r;
    r.depth = fc.radius - sec.radius;
    r.witness_axis_point = basis.b1 * sec.center.x + basis.b2 * sec.center.y;
    return r;
}

// order along v on the flat config; returns false on a tie
bool order_key_flat(const FlatConfig& fc, const Vec3& v, std::vector<std::pair<double, int>>& keys) {
    keys.clear();
    for (std::size_t i = 0; i < fc.n; ++i) keys.emplace_back(v.dot(fc.centers[i]), static_cast<int>(i));
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 1; i < keys.size(); ++i)
        if (keys[i].first - keys[i - 1].first < tol::geom) return false;
    return true;
}

struct AscentScratch {
    std::vector<Vec2> pts;
    std::vector<std::pair<double, int>> keys;
};

// index sequence of the target order (fc index order)
std::vector<int> target_indices(const Configuration& cfg, const Order& target) {
    std::vector<int> idx;
    idx.reserve(target.size());
    for (const auto& label : target) {
        int i = cfg.index_of(label);
        if (i < 0) throw InvalidInput("order references unknown label: " + label);
        idx.push_back(i);
    }
    return idx;
}

bool order_matches(const FlatConfig& fc, const Vec3& v, const std::vector<int>& want,
                   AscentScratch& s) {
    if (!order_key_flat(fc, v, s.keys)) return false;
    for (std::size_t i = 0; i < want.size(); ++i)
        if (s.keys[i].second != want[i]) return false;
    return true;
}

// Pattern search maximizing depth subject to the order constraint.
// Returns the best (depth, direction) found starting from v0.
std::pair<double, Vec3> ascend_depth(const FlatConfig& fc, const std::vector<int>& want, Vec3 v,
                                     AscentScratch& s, int max_evals = 4000) {
    if (!order_matches(fc, v, want, s)) return {-kInf, v};
    double best = depth_flat(fc, v, s.pts).depth;
    double step = 0.2;
    int evals = 0;
    while (step > tol::convergence && evals < max_evals) {
        Basis2 basis = perp_basis(v);
        bool improved = false;
        const Vec3 dirs[4] = {basis.b1, -basis.b1, basis.b2, -basis.b2};
        for (const Vec3& d : dirs) {
            Vec3 v2 = (v + d * step).normalized();
            ++evals;
            if (!order_matches(fc, v2, want, s)) continue;
            double val = depth_flat(fc, v2, s.pts).depth;
            if (val > best + 1e-15) {
                best = val;
                v = v2;
                improved = true;
                break;
            }
        }
        if (!improved) step *= 0.5;
    }
    return {best, v};
}

TransversalWitness make_witness(const FlatConfig& fc, const Vec3& v, const Order& target,
                                AscentScratch& s) {
    DepthResult d = depth_flat(fc, v, s.pts);
    TransversalWitness w;
    w.line = Line::through(d.witness_axis_point, v);
    w.order = target;
    w.depth = d.depth;
    return w;
}

} // namespace

Basis2 perp_basis(const Vec3& v) {
    // pick the coordinate axis least aligned with v (smallest |component|)
    double ax = std::abs(v.x), ay = std::abs(v.y), az = std::abs(v.z);
    Vec3 e = ax <= ay && ax <= az ? Vec3{1, 0, 0} : (ay <= az ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    Vec3 b1 = (e - v * e.dot(v)).normalized();
    Vec3 b2 = v.cross(b1);
    return {b1, b2};
}

std::vector<Vec2> project_centers(const Configuration& cfg, const Vec3& v) {
    Basis2 basis = perp_basis(v);
    std::vector<Vec2> pts;
    pts.reserve(cfg.size());
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const Vec3& c = cfg.ball(i).center;
        pts.emplace_back(c.dot(basis.b1), c.dot(basis.b2));
    }
    return pts;
}

Circle2 smallest_enclosing_circle(std::span<const Vec2> pts) {
    std::vector<Vec2> scratch(pts.begin(), pts.end());
    return sec_scratch(scratch);
}

DepthResult depth(const Configuration& cfg, const Vec3& v) {
    FlatConfig fc(cfg);
    std::vector<Vec2> scratch;
    return depth_flat(fc, v, scratch);
}

Vec3 fibonacci_direction(std::int64_t k, std::int64_t n, std::uint64_t seed) {
    constexpr double golden_angle = 2.399963229728653; // 2*pi*(1 - 1/phi)
    Rng rng(seed, static_cast<std::uint64_t>(k) * 2654435761u + 17);
    double jitter_z = (rng.next_double() - 0.5) / static_cast<double>(n);
    double jitter_p = (rng.next_double() - 0.5) * golden_angle * 0.5;
    double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(n) + jitter_z;
    z = std::clamp(z, -1.0, 1.0);
    double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden_angle * static_cast<double>(k) + jitter_p;
    return {rho * std::cos(phi), rho * std::sin(phi), z};
}

FindResult find_transversal(const Configuration& cfg, const Order& target, std::int64_t budget,
                            std::uint64_t seed) {
    if (!is_permutation_of_labels(cfg, target))
        throw InvalidInput("target order is not a permutation of the configuration's labels");
    if (budget < 1) throw InvalidInput("find_transversal: budget must be >= 1");

    FlatConfig fc(cfg);
    std::vector<int> want = target_indices(cfg, target);
    AscentScratch s;

    FindResult res;
    res.best_depth = -kInf;

    // candidate starts: directions whose raw order already matches
    std::vector<std::pair<double, Vec3>> candidates;
    for (std::int64_t k = 0; k < budget; ++k) {
        ++res.starts_tried;
        Vec3 v = fibonacci_direction(k, budget, seed);
        bool matches = order_matches(fc, v, want, s);
        if (!matches) {
            v = -v;
            matches = order_matches(fc, v, want, s);
        }
        if (!matches) continue;
        res.order_matched = true;
        double d = depth_flat(fc, v, s.pts).depth;
        res.best_depth = std::max(res.best_depth, d);
        candidates.emplace_back(d, v);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    const std::size_t polish_count = std::min<std::size_t>(candidates.size(), 12);
    for (std::size_t i = 0; i < polish_count; ++i) {
        auto [d, v] = ascend_depth(fc, want, candidates[i].second, s);
        res.best_depth = std::max(res.best_depth, d);
        if (d >= -tol::geom) {
            TransversalWitness w = make_witness(fc, v, target, s);
            // re-validate exactly through the stabbing predicate
            try {
                if (stabbing_order(cfg, w.line) == target) {
                    res.witness = w;
                    return res;
                }
            } catch (const Error&) {
                // tie or marginal miss: keep searching
            }
        }
    }
    return res;
}

FindResult polish_transversal(const Configuration& cfg, const Order& target, const Vec3& v0) {
    if (!is_permutation_of_labels(cfg, target))
        throw InvalidInput("target order is not a permutation of the configuration's labels");
    FlatConfig fc(cfg);
    std::vector<int> want = target_indices(cfg, target);
    AscentScratch s;
    FindResult res;
    res.best_depth = -kInf;
    res.starts_tried = 1;
    for (const Vec3& v0s : {v0, -v0}) {
        if (!order_matches(fc, v0s, want, s)) continue;
        res.order_matched = true;
        auto [d, v] = ascend_depth(fc, want, v0s, s);
        res.best_depth = std::max(res.best_depth, d);
        if (d >= -tol::geom) {
            TransversalWitness w = make_witness(fc, v, target, s);
            try {
                if (stabbing_order(cfg, w.line) == target) {
                    res.witness = w;
                    return res;
                }
            } catch (const Error&) {
            }
        }
    }
    return res;
}

EnumerationResult enumerate_geometric_permutations(const Configuration& cfg,
                                                   std::int64_t resolution, std::uint64_t seed,
                                                   int threads) {
    if (resolution < 10000) throw InvalidInput("enumerate: resolution must be >= 1e4");
    FlatConfig fc(cfg);

    int nw = resolve_threads(threads);
    struct Candidate {
        double depth;
        std::int64_t k;
        Vec3 v;
        Order order; // canonical representative
    };
    // per-worker candidate maps, merged deterministically afterwards
    std::vector<std::map<std::string, Candidate>> local(static_cast<std::size_t>(nw));

    parallel_for(resolution, nw, [&](std::int64_t k, int w) {
        thread_local AscentScratch s;
        Vec3 v = fibonacci_direction(k, resolution, seed);
        if (!fc.pairs_feasible(v)) return;
        DepthResult d = depth_flat(fc, v, s.pts);
        if (d.depth <= 0) return;
        if (!order_key_flat(fc, v, s.keys)) return; // skip tie directions
        Order o;
        o.reserve(fc.n);
        for (const auto& [key, idx] : s.keys) o.push_back(cfg.label(static_cast<std::size_t>(idx)));
        GeometricPermutation gp = canonicalize(o);
        auto& slot = local[static_cast<std::size_t>(w)];
        auto it = slot.find(gp.str());
        if (it == slot.end() || d.depth > it->second.depth ||
            (d.depth == it->second.depth && k < it->second.k))
            slot[gp.str()] = {d.depth, k, v, gp.canonical};
    });

    std::map<std::string, Candidate> merged;
    for (const auto& slot : local)
        for (const auto& [gp, cand] : slot) {
            auto it = merged.find(gp);
            if (it == merged.end() || cand.depth > it->second.depth ||
                (cand.depth == it->second.depth && cand.k < it->second.k))
                merged[gp] = cand;
        }

    EnumerationResult out;
    out.candidates_seen = static_cast<std::int64_t>(merged.size());
    for (const auto& [gp_str, cand] : merged) {
        // certification: never report a raw grid hit; re-run the local optimizer
        FindResult fr = polish_transversal(cfg, cand.order, cand.v);
        if (!fr.found()) {
            ++out.candidates_dropped;
            continue;
        }
        out.gps.push_back(GeometricPermutation{cand.order});
        out.certificates.push_back(*fr.witness);
    }
    return out;
}

} // namespace trv
