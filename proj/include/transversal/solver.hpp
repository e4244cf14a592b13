#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "transversal/geometry.hpp"

namespace trv {

struct Basis2 {
    Vec3 b1, b2; // orthonormal basis of v-perp, chosen deterministically from v
};
Basis2 perp_basis(const Vec3& v);

// Orthogonal projections of all centers onto v-perp, expressed in perp_basis(v).
std::vector<Vec2> project_centers(const Configuration& cfg, const Vec3& v);

struct Circle2 {
    Vec2 center;
    double radius = 0.0;
};

// Unique minimal enclosing circle (Welzl, move-to-front, deterministic).
Circle2 smallest_enclosing_circle(std::span<const Vec2> pts);

struct DepthResult {
    double depth = 0.0;          // common radius - SEC radius of projected centers
    Vec3 witness_axis_point;     // SEC center lifted back to 3D (in the v-perp plane through the origin)
};

// Throws MixedRadii unless all radii agree within tol::geom.
DepthResult depth(const Configuration& cfg, const Vec3& v);

struct TransversalWitness {
    Line line;
    Order order;
    double depth = 0.0;
};

struct FindResult {
    std::optional<TransversalWitness> witness;
    // best depth seen under the order constraint; -inf if the order never matched
    double best_depth;
    bool order_matched = false;
    std::int64_t starts_tried = 0;

    bool found() const { return witness.has_value(); }
};

// Deterministic multistart (seeded Fibonacci directions + jitter) with local
// ascent on depth; the order constraint acts as a feasibility filter. A miss
// means budget exhaustion, not a proof of nonexistence.
FindResult find_transversal(const Configuration& cfg, const Order& target,
                            std::int64_t budget, std::uint64_t seed);

// Local ascent only, from a given start direction (used for warm starts).
FindResult polish_transversal(const Configuration& cfg, const Order& target, const Vec3& v0);

struct EnumerationResult {
    std::vector<GeometricPermutation> gps;       // sorted
    std::vector<TransversalWitness> certificates; // parallel to gps
    std::int64_t candidates_seen = 0;
    std::int64_t candidates_dropped = 0;         // failed certification
};

// Direction-sphere sweep + certification. Requires resolution >= 1e4.
EnumerationResult enumerate_geometric_permutations(const Configuration& cfg,
                                                   std::int64_t resolution,
                                                   std::uint64_t seed, int threads = 1);

// k-th direction of a seeded, jittered Fibonacci lattice of size n on S^2
Vec3 fibonacci_direction(std::int64_t k, std::int64_t n, std::uint64_t seed);

} // namespace trv
