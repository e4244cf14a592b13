#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "transversal/geometry.hpp"
#include "transversal/solver.hpp"

namespace trv {

struct DistanceLemmaReport {
    bool holds = false;
    double margin = 0; // |ad| - max(|ab|, |bc|, |cd|)
    double ad = 0, ab = 0, bc = 0, cd = 0;
};

// Requires exactly four balls stabbed by l in the configuration's label
// order. Throws NotATransversal / WrongOrder.
DistanceLemmaReport check_distance_lemma(const Configuration& cfg, const Line& l);

// Companion three-ball checker: margin = |ac| - max(|ab|, |bc|). The lemma has
// no three-ball analogue, so holds = false is a legitimate outcome.
DistanceLemmaReport check_distance_lemma3(const Configuration& cfg, const Line& l);

struct IncompatibilityGraph {
    std::vector<std::string> vertices;                              // the 12 GPs of {A,B,C,D}
    std::vector<std::pair<std::string, std::string>> edges;         // all derived incompatibilities
    std::vector<std::string> abcd_excluded;                         // eliminated directly by ABCD
    std::vector<std::string> abcd_compatible;                       // the remaining 7
    std::vector<std::pair<std::string, std::string>> edges_restricted; // among the 7
    int independence_number = 0;                                    // on the 7
};

IncompatibilityGraph build_incompatibility_graph();

struct AngleLemmaReport {
    bool holds = false;
    double angle = 0; // between direction(l) and c - a
};

// l must stab A, B, C in that order (WrongOrder otherwise).
AngleLemmaReport check_angle_lemma(const Ball& A, const Ball& B, const Ball& C, const Line& l);

struct TriangleLemmaReport {
    double angle_x = 0, angle_y = 0, angle_z = 0;
    bool acute_x = false, acute_y = false, acute_z = false;
    double yz = 0;
    double yz_bound = 0; // 2*sqrt(2)
    bool yz_ok = false;
    bool has_xyz = false, has_xzy = false;
};

TriangleLemmaReport check_triangle_lemmas(const Ball& X, const Ball& Y, const Ball& Z,
                                          const std::optional<Line>& witness_xyz,
                                          const std::optional<Line>& witness_xzy);

struct Disk2 {
    Vec2 center;
    double radius = 1.0;
};

struct Line2 {
    Vec2 point;
    Vec2 dir; // unit
};

// Given two distinct same-order transversals of planar disks, produce a line
// with the same order and strictly positive clearance to every disk.
Line2 interior_transversal_2d(const std::vector<Disk2>& disks, const Line2& l1, const Line2& l2);

// --- instance generators -------------------------------------------------

// Unit balls rejection-sampled in a cube of the given side length.
Configuration random_configuration_box(int n, double box_side, std::uint64_t seed,
                                       int max_attempts = 100000);

struct CertifiedInstance {
    Configuration cfg;
    Line line; // stabs the balls exactly in label order (re-validated)
};

// Direct construction around a random line: increasing stabbing parameters,
// perpendicular offsets < 1, random rigid motion. Labels "A", "B", ...
CertifiedInstance random_order_instance(int n, std::uint64_t seed);

} // namespace trv
