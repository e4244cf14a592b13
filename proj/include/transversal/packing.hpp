#pragma once

#include <cstdint>
#include <vector>

#include "transversal/errors.hpp"
#include "transversal/vec.hpp"

namespace trv {

struct PackingReport {
    std::vector<Vec3> points;
    double min_pairwise_distance = 0;
    int target_count = 0;
    bool converged = false;
    std::int64_t moves_evaluated = 0;
};

// Maximize the minimum pairwise distance of `count` points inside the
// radius-1 cylinder {0 <= x <= length, y^2 + z^2 <= 1} (a disk when
// length = 0). Seeded multistart with structured first starts; budget counts
// candidate point moves. Best-effort: the report states the best found.
PackingReport pack_cylinder(double length, int count, std::int64_t budget, std::uint64_t seed);

// Same for the intersection of two radius-1 cylinders: axis 1 is the x-axis,
// axis 2 passes through (0, 0, offset) with direction (cos theta, sin theta, 0).
// Throws BadAngle unless pi/4 < theta <= pi/2.
PackingReport pack_two_cylinders(double theta, double offset, int count, std::int64_t budget,
                                 std::uint64_t seed);

} // namespace trv
