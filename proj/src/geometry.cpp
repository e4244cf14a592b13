#include "transversal/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace trv {

Line Line::through(const Vec3& point, const Vec3& dir) {
    double n = dir.norm();
    if (!(n > tol::unit)) throw InvalidInput("Line::through: zero direction");
    Line l;
    l.direction_ = dir * (1.0 / n);
    l.anchor_ = point - l.direction_ * point.dot(l.direction_);
    // one re-projection pass keeps anchor . direction at roundoff level
    l.anchor_ = l.anchor_ - l.direction_ * l.anchor_.dot(l.direction_);
    return l;
}

Line Line::reversed() const {
    Line l(*this);
    l.direction_ = -l.direction_;
    return l;
}

Line Line::canonical_unoriented() const {
    const Vec3& d = direction_;
    bool flip = false;
    if (d.x < -tol::unit)
        flip = true;
    else if (std::abs(d.x) <= tol::unit && d.y < -tol::unit)
        flip = true;
    else if (std::abs(d.x) <= tol::unit && std::abs(d.y) <= tol::unit && d.z < 0)
        flip = true;
    return flip ? reversed() : *this;
}

double Line::deviation(const Line& o) const {
    double da = (anchor_ - o.anchor_).norm();
    double dd = std::min((direction_ - o.direction_).norm(), (direction_ + o.direction_).norm());
    return std::max(da, dd);
}

double dist_point_line(const Vec3& p, const Line& l) {
    Vec3 w = p - l.anchor();
    Vec3 perp = w - l.direction() * w.dot(l.direction());
    return perp.norm();
}

std::string order_to_string(const Order& o) {
    bool single = std::all_of(o.begin(), o.end(), [](const std::string& s) { return s.size() == 1; });
    std::string out;
    for (std::size_t i = 0; i < o.size(); ++i) {
        if (!single && i) out += ',';
        out += o[i];
    }
    return out;
}

Order order_from_string(const std::string& s) {
    Order o;
    if (s.find(',') != std::string::npos) {
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) throw InvalidInput("empty label in order string");
            o.push_back(item);
        }
    } else {
        for (char c : s) o.push_back(std::string(1, c));
    }
    if (o.empty()) throw InvalidInput("empty order string");
    return o;
}

GeometricPermutation canonicalize(const Order& o) {
    Order rev(o.rbegin(), o.rend());
    return GeometricPermutation{std::min(o, rev)};
}

Configuration Configuration::from_balls_unchecked(std::vector<std::pair<std::string, Ball>> balls) {
    std::set<std::string> seen;
    for (const auto& [label, ball] : balls) {
        if (label.empty()) throw InvalidInput("ball label must be non-empty");
        if (!seen.insert(label).second) throw InvalidInput("duplicate ball label: " + label);
        if (!(ball.radius > 0)) throw InvalidInput("ball radius must be positive: " + label);
        if (!std::isfinite(ball.center.x) || !std::isfinite(ball.center.y) ||
            !std::isfinite(ball.center.z) || !std::isfinite(ball.radius))
            throw InvalidInput("non-finite ball data: " + label);
    }
    Configuration cfg;
    cfg.balls_ = std::move(balls);
    return cfg;
}

Configuration Configuration::from_balls(std::vector<std::pair<std::string, Ball>> balls) {
    Configuration cfg = from_balls_unchecked(std::move(balls));
    for (std::size_t i = 0; i < cfg.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.size(); ++j) {
            double d = (cfg.ball(i).center - cfg.ball(j).center).norm();
            double need = cfg.ball(i).radius + cfg.ball(j).radius;
            if (d < need - tol::geom)
                throw InvalidInput("balls overlap: " + cfg.label(i) + ", " + cfg.label(j));
        }
    return cfg;
}

Configuration Configuration::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw InvalidInput(std::string("configuration JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("balls") || !j["balls"].is_array())
        throw InvalidInput("configuration JSON must be an object with a \"balls\" array");
    std::vector<std::pair<std::string, Ball>> balls;
    for (const auto& b : j["balls"]) {
        if (!b.is_object() || !b.contains("label") || !b.contains("center") || !b.contains("radius"))
            throw InvalidInput("each ball needs label, center, radius");
        if (!b["center"].is_array() || b["center"].size() != 3)
            throw InvalidInput("ball center must be [x, y, z]");
        Ball ball;
        ball.center = Vec3(b["center"][0].get<double>(), b["center"][1].get<double>(),
                           b["center"][2].get<double>());
        ball.radius = b["radius"].get<double>();
        balls.emplace_back(b["label"].get<std::string>(), ball);
    }
    return from_balls(std::move(balls));
}

Configuration Configuration::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open configuration file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string Configuration::to_json(int indent) const {
    nlohmann::json j;
    j["balls"] = nlohmann::json::array();
    for (const auto& [label, ball] : balls_) {
        j["balls"].push_back({{"label", label},
                              {"center", {ball.center.x, ball.center.y, ball.center.z}},
                              {"radius", ball.radius}});
    }
    return j.dump(indent);
}

int Configuration::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < balls_.size(); ++i)
        if (balls_[i].first == label) return static_cast<int>(i);
    return -1;
}

Order Configuration::labels() const {
    Order o;
    o.reserve(balls_.size());
    for (const auto& [label, ball] : balls_) o.push_back(label);
    return o;
}

bool Configuration::common_radius(double* r) const {
    if (balls_.empty()) return false;
    double lo = balls_[0].second.radius, hi = lo;
    for (const auto& [label, ball] : balls_) {
        lo = std::min(lo, ball.radius);
        hi = std::max(hi, ball.radius);
    }
    if (r) *r = 0.5 * (lo + hi);
    return hi - lo <= tol::geom;
}

bool Configuration::non_overlapping() const {
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j) {
            double d = (ball(i).center - ball(j).center).norm();
            if (d < ball(i).radius + ball(j).radius - tol::geom) return false;
        }
    return true;
}

bool Configuration::centers_collinear(double tolerance) const {
    if (size() <= 2) return true;
    // find the farthest pair to define the axis
    std::size_t a = 0, b = 1;
    double best = -1;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j) {
            double d = (ball(i).center - ball(j).center).norm2();
            if (d > best) best = d, a = i, b = j;
        }
    if (best <= tolerance * tolerance) return true;
    Vec3 dir = (ball(b).center - ball(a).center).normalized();
    for (std::size_t i = 0; i < size(); ++i) {
        Vec3 w = ball(i).center - ball(a).center;
        if ((w - dir * w.dot(dir)).norm() > tolerance) return false;
    }
    return true;
}

Configuration Configuration::with_radius(double r) const {
    auto copy = balls_;
    for (auto& [label, ball] : copy) ball.radius = r;
    return from_balls_unchecked(std::move(copy));
}

Configuration Configuration::transformed(const Vec3& translation) const {
    auto copy = balls_;
    for (auto& [label, ball] : copy) ball.center = ball.center + translation;
    return from_balls_unchecked(std::move(copy));
}

Order order_along(const Configuration& cfg, const Vec3& v) {
    std::vector<std::pair<double, std::size_t>> keys;
    keys.reserve(cfg.size());
    for (std::size_t i = 0; i < cfg.size(); ++i) keys.emplace_back(v.dot(cfg.ball(i).center), i);
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 1; i < keys.size(); ++i)
        if (keys[i].first - keys[i - 1].first < tol::geom)
            throw TieError("order undefined: projections of " + cfg.label(keys[i - 1].second) +
                           " and " + cfg.label(keys[i].second) + " coincide");
    Order o;
    o.reserve(keys.size());
    for (const auto& [key, idx] : keys) o.push_back(cfg.label(idx));
    return o;
}

Order stabbing_order(const Configuration& cfg, const Line& l) {
    struct Chord {
        double t, halfwidth;
        std::size_t idx;
    };
    std::vector<Chord> chords;
    chords.reserve(cfg.size());
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        const Ball& b = cfg.ball(i);
        double d = dist_point_line(b.center, l);
        if (d > b.radius + tol::geom)
            throw NotATransversal("line misses ball " + cfg.label(i) +
                                  " (clearance " + std::to_string(d - b.radius) + ")");
        double t = l.param_of(b.center);
        double w2 = b.radius * b.radius - d * d;
        chords.push_back({t, std::sqrt(std::max(0.0, w2)), i});
    }
    std::sort(chords.begin(), chords.end(), [](const Chord& a, const Chord& b) { return a.t < b.t; });
    for (std::size_t i = 1; i < chords.size(); ++i) {
        if (chords[i].t - chords[i - 1].t < tol::geom)
            throw TieError("stabbing order undefined: feet of " + cfg.label(chords[i - 1].idx) +
                           " and " + cfg.label(chords[i].idx) + " coincide");
        double gap = (chords[i].t - chords[i].halfwidth) - (chords[i - 1].t + chords[i - 1].halfwidth);
        if (gap < -tol::geom)
            throw NotATransversal("chords of " + cfg.label(chords[i - 1].idx) + " and " +
                                  cfg.label(chords[i].idx) + " overlap along the line");
    }
    Order o;
    o.reserve(chords.size());
    for (const auto& c : chords) o.push_back(cfg.label(c.idx));
    return o;
}

bool is_permutation_of_labels(const Configuration& cfg, const Order& o) {
    if (o.size() != cfg.size()) return false;
    Order a = cfg.labels(), b = o;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

} // namespace trv
