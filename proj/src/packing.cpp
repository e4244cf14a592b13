#include "transversal/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "transversal/rng.hpp"

namespace trv {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Region {
    virtual ~Region() = default;
    virtual Vec3 project(const Vec3& p) const = 0;
    virtual Vec3 sample(Rng& rng) const = 0;
};

struct CylinderRegion : Region {
    double length;
    explicit CylinderRegion(double l) : length(l) {}

    Vec3 project(const Vec3& p) const override {
        Vec3 q = p;
        q.x = std::clamp(q.x, 0.0, length);
        double r = std::hypot(q.y, q.z);
        if (r > 1.0) {
            q.y /= r;
            q.z /= r;
        }
        return q;
    }
    Vec3 sample(Rng& rng) const override {
        for (;;) {
            double y = rng.uniform(-1, 1), z = rng.uniform(-1, 1);
            if (y * y + z * z <= 1.0) return {rng.uniform(0, length), y, z};
        }
    }
};

struct TwoCylinderRegion : Region {
    double theta, offset;
    Vec3 axis2; // direction of the second axis; it passes through (0, 0, offset)
    double xmax;

    TwoCylinderRegion(double th, double off) : theta(th), offset(off) {
        axis2 = {std::cos(theta), std::sin(theta), 0};
        // |x sin(theta) - y cos(theta)| <= 1 and |y| <= 1 bound x
        xmax = (1.0 + std::abs(std::cos(theta))) / std::sin(theta) + 1.0;
    }

    double dist2_axis2(const Vec3& p) const {
        Vec3 w = p - Vec3{0, 0, offset};
        double t = w.dot(axis2);
        return w.norm2() - t * t;
    }

    bool inside(const Vec3& p) const {
        return p.y * p.y + p.z * p.z <= 1.0 + 1e-12 && dist2_axis2(p) <= 1.0 + 1e-12;
    }

    Vec3 project(const Vec3& p) const override {
        // alternating projections onto the two cylinders
        Vec3 q = p;
        q.x = std::clamp(q.x, -xmax, xmax);
        for (int iter = 0; iter < 64; ++iter) {
            double r = std::hypot(q.y, q.z);
            if (r > 1.0) {
                q.y /= r;
                q.z /= r;
            }
            double d2 = dist2_axis2(q);
            if (d2 > 1.0) {
                Vec3 w = q - Vec3{0, 0, offset};
                double t = w.dot(axis2);
                Vec3 foot = Vec3{0, 0, offset} + axis2 * t;
                Vec3 radial = q - foot;
                q = foot + radial * (1.0 / std::sqrt(d2));
            } else if (q.y * q.y + q.z * q.z <= 1.0 + 1e-12) {
                break;
            }
        }
        return q;
    }

    Vec3 sample(Rng& rng) const override {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            Vec3 p{rng.uniform(-xmax, xmax), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            if (inside(p)) return p;
        }
        return project({0, 0, std::clamp(offset, -1.0, 1.0)});
    }
};

double min_pairwise(const std::vector<Vec3>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::min(best, (pts[i] - pts[j]).norm());
    return best;
}

// greedy bottleneck improvement: move one endpoint of the closest pair
PackingReport maximin(const Region& region, int count,
                      const std::vector<std::vector<Vec3>>& structured_starts,
                      std::int64_t budget, std::uint64_t seed) {
    if (count < 1) throw InvalidInput("packing: count must be >= 1");
    PackingReport best;
    best.target_count = count;
    best.min_pairwise_distance = -1;

    std::int64_t moves = 0;
    std::size_t start_index = 0;
    Rng seq(seed);
    while (moves < budget) {
        std::vector<Vec3> pts;
        Rng rng(seed, 1000 + start_index);
        if (start_index < structured_starts.size()) {
            pts = structured_starts[start_index];
            for (auto& p : pts) p = region.project(p);
        } else {
            for (int i = 0; i < count; ++i) pts.push_back(region.sample(rng));
        }
        ++start_index;
        if (static_cast<int>(pts.size()) != count) {
            pts.resize(static_cast<std::size_t>(count), region.sample(rng));
        }

        double step = 0.5;
        double current = min_pairwise(pts);
        bool converged = false;
        while (moves < budget) {
            // bottleneck pair
            std::size_t bi = 0, bj = 1;
            double bd = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j) {
                    double d = (pts[i] - pts[j]).norm();
                    if (d < bd) bd = d, bi = i, bj = j;
                }
            if (count == 1) {
                converged = true;
                break;
            }
            bool improved = false;
            for (std::size_t who : {bi, bj}) {
                // push away from the partner plus random exploration
                Vec3 partner = pts[who == bi ? bj : bi];
                Vec3 away = pts[who] - partner;
                double an = away.norm();
                Vec3 dir0 = an > 1e-12 ? away * (1.0 / an) : rng.unit_vec3();
                for (int k = 0; k < 6 && moves < budget; ++k) {
                    ++moves;
                    Vec3 dir = k == 0 ? dir0 : rng.unit_vec3();
                    Vec3 cand = region.project(pts[who] + dir * step);
                    Vec3 old = pts[who];
                    pts[who] = cand;
                    double val = min_pairwise(pts);
                    if (val > current + 1e-15) {
                        current = val;
                        improved = true;
                        break;
                    }
                    pts[who] = old;
                }
                if (improved) break;
            }
            if (!improved) {
                step *= 0.6;
                if (step < 1e-7) {
                    converged = true;
                    break;
                }
            }
        }
        if (current > best.min_pairwise_distance) {
            best.min_pairwise_distance = current;
            best.points = pts;
            best.converged = converged;
        }
        if (start_index >= structured_starts.size() && moves >= budget) break;
    }
    best.moves_evaluated = moves;
    return best;
}

} // namespace

PackingReport pack_cylinder(double length, int count, std::int64_t budget, std::uint64_t seed) {
    if (length < 0) throw InvalidInput("pack_cylinder: length must be >= 0");
    CylinderRegion region(length);

    // structured starts: diameter pairs rotated 90 degrees between the ends
    std::vector<std::vector<Vec3>> starts;
    {
        std::vector<Vec3> s;
        for (int i = 0; i < count; ++i) {
            int slot = i / 2;
            double x = count <= 2 ? (length * (i % 2 == 0 ? 0.0 : 1.0))
                                  : length * static_cast<double>(slot) /
                                        std::max(1.0, std::ceil(count / 2.0) - 1);
            double sign = i % 2 == 0 ? 1.0 : -1.0;
            bool rotated = slot % 2 == 1;
            s.push_back(rotated ? Vec3{x, 0, sign} : Vec3{x, sign, 0});
        }
        starts.push_back(s);
        std::vector<Vec3> ends;
        for (int i = 0; i < count; ++i) {
            double ang = 2 * kPi * static_cast<double>(i) / count;
            ends.push_back({length * (i % 2 == 0 ? 0.0 : 1.0), std::cos(ang), std::sin(ang)});
        }
        starts.push_back(ends);
    }
    return maximin(region, count, starts, budget, seed);
}

PackingReport pack_two_cylinders(double theta, double offset, int count, std::int64_t budget,
                                 std::uint64_t seed) {
    if (!(theta > kPi / 4 && theta <= kPi / 2))
        throw BadAngle("pack_two_cylinders requires pi/4 < theta <= pi/2");
    TwoCylinderRegion region(theta, offset);

    std::vector<std::vector<Vec3>> starts;
    {
        // spread along the first axis, alternating disk poles
        std::vector<Vec3> s;
        for (int i = 0; i < count; ++i) {
            double x = -region.xmax + 2 * region.xmax * (static_cast<double>(i) + 0.5) / count;
            double sign = i % 2 == 0 ? 1.0 : -1.0;
            s.push_back({x, 0, sign});
        }
        starts.push_back(s);
    }
    return maximin(region, count, starts, budget, seed);
}

} // namespace trv
