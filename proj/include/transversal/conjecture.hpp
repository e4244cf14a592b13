#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "transversal/polysys.hpp"

namespace trv {

// Four unit balls (a at the origin, b on the x-axis, c in the xy-plane) and
// two lines, each through the x = 0 plane with direction (1, q, r).
struct TangencySearchState {
    double xb = 4, xc = 2, yc = 2, xd = 2, yd = 1, zd = 2;
    double p1y = 0, p1z = 0, q1 = 0, r1 = 0;
    double p2y = 0, p2z = 0, q2 = 0, r2 = 0;

    static constexpr std::size_t dim = 14;
    std::array<double, dim> flat() const;
    static TangencySearchState from_flat(const std::array<double, dim>& x);
    static const std::vector<std::string>& names();
};

// max constraint residual; 0 would witness permutations ABCD and ACDB at once
double merit_tangency(const TangencySearchState& s);

struct PinningSearchState {
    double h = 1;
    std::array<double, 4> t{-3, -2, 2, 3};
    double hp = 1;
    std::array<double, 4> tp{-3, -2, 2, 3};
    double u = 1;

    static constexpr std::size_t dim = 11;
    std::array<double, dim> flat() const;
    static PinningSearchState from_flat(const std::array<double, dim>& x);
    static const std::vector<std::string>& names();
};

// max residual over the pinning system's equalities (absolute value, after
// denominator rescaling) and inequalities (hinge)
double merit_pinning(const PinningSearchState& s);

// signed, denominator-rescaled equality residuals (six distance matches plus
// the saturation), via the geometric route
std::vector<double> pinning_equality_residuals(const PinningSearchState& s);

struct SearchReport {
    std::string formulation;
    std::vector<std::string> state_names;
    std::vector<double> best_state;
    double best_violation = 0;
    std::int64_t samples_evaluated = 0;
    std::int64_t starts = 0;
    std::uint64_t seed = 0;
    std::int64_t budget = 0;
    double wall_time_seconds = 0;      // excluded from replay comparisons
    int equality_jacobian_rank = -1;   // pinning formulation only
};

SearchReport search_tangency(std::int64_t budget, std::uint64_t seed, int threads = 1);
SearchReport search_pinning(std::int64_t budget, std::uint64_t seed, int threads = 1);

// 11 variables, 7 equalities (six cleared distance matches + saturation),
// 12 inequalities (orderings strict, non-overlap non-strict)
PolynomialSystem build_pinning_system();

// numerator / denominator of |wv|^2 for two hyperboloidal balls, as exact
// polynomials in the given variables (used by the system builder and by the
// degree/cross-validation tests)
struct DistanceFraction {
    Poly num;
    Poly den;
};
DistanceFraction hyperboloidal_distance2_fraction(std::size_t nvars, std::size_t var_h,
                                                  std::size_t var_tw, std::size_t var_tv);

} // namespace trv
