#pragma once

#include <string>
#include <utility>
#include <vector>

#include "transversal/constants.hpp"
#include "transversal/errors.hpp"
#include "transversal/vec.hpp"

namespace trv {

struct Ball {
    Vec3 center;
    double radius = 1.0;
};

// A line in canonical form: the anchor is the foot of the perpendicular from
// the origin (anchor . direction = 0) and the direction is unit length. The
// stored direction carries the orientation; canonical_unoriented() flips it to
// the lexicographically nonnegative representative.
class Line {
  public:
    Line() : anchor_{0, 0, 0}, direction_{1, 0, 0} {}

    // Line through `point` with direction `dir` (not necessarily unit).
    static Line through(const Vec3& point, const Vec3& dir);

    const Vec3& anchor() const { return anchor_; }
    const Vec3& direction() const { return direction_; }

    Vec3 point_at(double t) const { return anchor_ + direction_ * t; }
    double param_of(const Vec3& p) const { return (p - anchor_).dot(direction_); }

    Line reversed() const;
    Line canonical_unoriented() const;

    // max of anchor distance and direction deviation against another line
    double deviation(const Line& o) const;

  private:
    Vec3 anchor_;
    Vec3 direction_;
};

double dist_point_line(const Vec3& p, const Line& l);

using Order = std::vector<std::string>;

std::string order_to_string(const Order& o);
// "ABCD" -> {"A","B","C","D"}; "A1,B2,C3" -> {"A1","B2","C3"}
Order order_from_string(const std::string& s);

struct GeometricPermutation {
    Order canonical;

    bool operator==(const GeometricPermutation& o) const { return canonical == o.canonical; }
    bool operator<(const GeometricPermutation& o) const { return canonical < o.canonical; }
    std::string str() const { return order_to_string(canonical); }
};

// lexicographic minimum of the order and its reverse
GeometricPermutation canonicalize(const Order& o);

// Labeled, ordered family of non-overlapping balls in R^3.
class Configuration {
  public:
    // Validates: unique non-empty labels, positive radii, finite coordinates,
    // |c_i - c_j| >= r_i + r_j - tol::geom for every pair.
    static Configuration from_balls(std::vector<std::pair<std::string, Ball>> balls);
    // Skips the non-overlap check (used by constructions that report overlap
    // as a flag instead of rejecting it).
    static Configuration from_balls_unchecked(std::vector<std::pair<std::string, Ball>> balls);

    static Configuration from_json(const std::string& text);
    static Configuration load(const std::string& path);
    std::string to_json(int indent = -1) const;

    std::size_t size() const { return balls_.size(); }
    const Ball& ball(std::size_t i) const { return balls_[i].second; }
    const std::string& label(std::size_t i) const { return balls_[i].first; }
    int index_of(const std::string& label) const;
    Order labels() const;

    // true iff all radii agree within tol::geom; r receives the common radius
    bool common_radius(double* r) const;
    bool non_overlapping() const;
    bool centers_collinear(double tolerance = tol::geom) const;

    Configuration with_radius(double r) const;
    Configuration transformed(const Vec3& translation) const;

  private:
    std::vector<std::pair<std::string, Ball>> balls_;
};

// Labels sorted by increasing v . center. Throws TieError when two adjacent
// keys differ by less than tol::geom.
Order order_along(const Configuration& cfg, const Vec3& v);

// Order in which an oriented transversal meets the balls. Throws
// NotATransversal if a ball is missed, TieError on coincident feet. Touching
// balls are fine as long as the chords progress (gap >= -tol::geom) and the
// line is not tangent to two balls in a common point.
Order stabbing_order(const Configuration& cfg, const Line& l);

// permutation check helper
bool is_permutation_of_labels(const Configuration& cfg, const Order& o);

} // namespace trv
