#pragma once

#include <cstdint>
#include <vector>

#include "transversal/errors.hpp"

namespace trv::fn {

// g(phi) = sqrt(2 + 2 cos phi), the superadditive chord complement
double g(double phi);

// f(x) = sin x (sin x + cos x), the double-pinning gain; > 1 on (pi/4, pi/2)
double f_pin(double x);

// sin^2 x + (cot x + sin x - 1)^2, the factorized bound; < 1 on (pi/4, pi/2)
double abc1_expr(double x);

// R(z) = sqrt(1 - z^2) and derivatives, |z| < 1
double R(double z);
double R1(double z);
double R2(double z);
double R3(double z);

// f(z) = (R(z) + R(z - b)) / d for a ball pair at planar distance d, height
// offset b; domain b - 1 < z < 1. Throws DomainError outside.
double f_ratio(double z, double d, double b);

// G(z) = arcsin(f(z)); G1, G2 are closed-form first/second derivatives,
// G2_fd is the independent central finite-difference route (Richardson).
double G(double z, double d, double b);
double G1(double z, double d, double b);
double G2(double z, double d, double b);
double G2_fd(double z, double d, double b, double h = 1e-4);

struct AngleFunctionTable {
    double d = 0, b = 0;
    std::vector<double> z, G, G1, G2;
};

// strictly inside (b/2, 1): grid on [b/2 + 1e-3, 1 - 1e-3]
AngleFunctionTable make_angle_table(double d, double b, int n);

struct GSuperadditivityReport {
    std::int64_t cells = 0;
    std::int64_t violations = 0;       // g(x+y+z) > g(x)+g(y)+g(z) + tol
    std::int64_t equality_cells = 0;   // |difference| <= eq_tol
    std::int64_t mismatched_flags = 0; // equality cell without two args = pi, or vice versa
    double max_violation = 0;
};

// n^3 grid over [0, 2pi)^3
GSuperadditivityReport scan_g_superadditivity(int n, double tolerance = 1e-9,
                                              double eq_tol = 1e-6);

struct IntervalScanReport {
    std::int64_t points = 0;
    std::int64_t violations_f = 0;   // f_pin <= 1 + tol
    std::int64_t violations_abc = 0; // abc1_expr >= 1 - tol
    double min_f_margin = 0;         // min of f_pin - 1
    double min_abc_margin = 0;       // min of 1 - abc1_expr
};

// uniform grid on [pi/4 + margin, pi/2 - margin]
IntervalScanReport scan_pin_inequalities(std::int64_t points, double margin = 5e-3,
                                         double tolerance = 1e-9);

struct ConcavityReport {
    std::int64_t pairs = 0;
    std::int64_t grid_points = 0;
    std::int64_t violations = 0; // finite-difference G'' >= -1e-8
    double max_g2 = 0;           // largest (least negative) G'' observed
};

// random non-touching ball pairs (margin on the center distance), z-grid
// clipped to [b/2 + 1e-3, 1 - 1e-3]
ConcavityReport scan_G_concavity(int pairs, int grid, std::uint64_t seed);

} // namespace trv::fn
