#pragma once

// Central tolerance table. Every geometric predicate, optimizer stopping rule
// and rank test in the library reads from here.
namespace trv::tol {

inline constexpr double geom = 1e-9;         // geometric predicates (tangency, overlap, ties)
inline constexpr double convergence = 1e-10; // bisection / local-optimizer stopping width
inline constexpr double unit = 1e-12;        // unit-vector and canonical-form drift
inline constexpr double rank = 1e-8;         // singular-value ratio threshold for rank decisions

} // namespace trv::tol
