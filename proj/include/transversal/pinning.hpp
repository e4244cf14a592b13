#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "transversal/geometry.hpp"
#include "transversal/solver.hpp"

namespace trv {

// Line through (u1, u2, 0) and (u3, u4, 1); valid for lines not parallel to
// z = const planes.
struct LineCoords4 {
    double u1 = 0, u2 = 0, u3 = 0, u4 = 0;
};

// Deterministic rigid motion taking a line to the z-axis. All chart-based
// machinery (R^4 coordinates, screens, perturbation scans) works in these
// coordinates, where the reference line is (0,0,0,0).
class LineChart {
  public:
    explicit LineChart(const Line& l);

    Vec3 to_chart(const Vec3& p) const;
    Vec3 from_chart(const Vec3& p) const;
    Ball to_chart(const Ball& b) const { return {to_chart(b.center), b.radius}; }
    Line from_chart(const Line& l) const;

  private:
    Vec3 rows_[3]; // rotation rows; row 2 is the line direction
    Vec3 origin_;  // the line's anchor
};

Line line_from_coords(const LineCoords4& u);            // in chart coordinates
LineCoords4 coords_from_line(const Line& l);            // throws DegenerateChart

struct Screen {
    std::string owner;
    Line ridge;               // world coordinates
    Vec4 halfspace_normal_4d; // outer normal of H(X) in the chart of l, unit length
};

// The line tangent to X and perpendicular to l in X ∩ l. Throws NotTangent.
Line ridge(const Ball& X, const Line& l);

Screen screen_normal(const Ball& X, const Line& l, const std::string& owner = "");

struct PinningCertificate {
    bool pinned = false;
    double scan_radius = 0;
    // transversality margin of the most nearly surviving perturbation:
    // max over scanned lines of (min over balls of radius - distance)
    double min_constraint_slack = 0;
    Order order;
    std::int64_t samples = 0;
};

// Scans seeded perturbations on the 3-sphere of the given radius in
// LineCoords4 around l. pinned = no perturbed line remains a transversal.
PinningCertificate is_pinned(const Configuration& cfg, const Line& l, double scan_radius,
                             std::int64_t samples = 10000, std::uint64_t seed = 0);

// Three nested shells (1e-2, 1e-3, 1e-4); pinned iff every shell fails.
bool certify_pinned(const Configuration& cfg, const Line& l, std::uint64_t seed = 0,
                    std::vector<PinningCertificate>* certificates = nullptr);

// Tangency to l, coplanarity of the three centers with l, and separation of
// the middle center from the outer two within that plane.
bool triple_pinning_predicate(const Ball& X, const Ball& Y, const Ball& Z, const Line& l);

struct ShrinkResult {
    double t_star = 0;
    Line line;
    bool collinear = false;
};

// Smallest common radius at which a transversal with the given order still
// exists (bisection to width tol::convergence), plus that transversal.
ShrinkResult shrink_to_pin(const Configuration& cfg, const Order& order, std::uint64_t seed = 0);

struct TwoStageResult {
    Configuration cfg;    // rescaled back to unit radius
    Line line1;           // transversal for order1
    Line line2;           // transversal for order2
    int pinned_first = 1; // which order pinned in stage 1
    double t1 = 0;        // radius at the end of stage 1 (pre-rescaling)
    double t2 = 0;        // radius at the end of stage 2 (pre-rescaling)
};

// Stage 1 shrinks uniformly about centers until one order pins; stage 2
// shrinks about the chord anchors on the pinned line until the other pins.
TwoStageResult two_stage_shrink(const Configuration& cfg, const Order& order1,
                                const Order& order2, std::uint64_t seed = 0);

enum class PinningClass {
    hyperboloidal,
    coplanar_ridges,
    concurrent_ridges,
    not_minimal,
    not_pinning,
};

std::string to_string(PinningClass c);

struct ClassifyResult {
    PinningClass cls;
    bool alternating = false;
    std::array<double, 4> singular_values{}; // of the 4x4 stack of screen normals
    std::vector<int> side_signs;             // quadric sides, ordered along l
    Order tangency_order;
};

// Rank analysis of the four screen normals with the trichotomy of minimal
// linear dependencies; hyperboloidal instances also get the alternation test
// via the transversal quadric of the four ridges.
ClassifyResult classify_minimal_pinning(const Configuration& cfg, const Line& l);

struct HyperboloidalParams {
    double h = 1;
    std::array<double, 4> t{};
};

struct HyperboloidalResult {
    Configuration cfg; // labels A..D, unit radius (overlap NOT rejected)
    Line line;         // the x-axis
    bool tangent_ok = true;
    bool non_overlapping = true;
};

// Centers w = (2ht/(1-t^2), (1-t^2)/(1+t^2), 2t/(1+t^2)) tangent to the
// x-axis. Throws DegenerateParameter when |1 - t^2| < tol::geom or two
// parameters coincide.
HyperboloidalResult make_hyperboloidal(const HyperboloidalParams& p);

} // namespace trv
