#include "transversal/special_functions.hpp"

#include <algorithm>
#include <cmath>

#include "transversal/rng.hpp"

namespace trv::fn {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double g(double phi) { return std::sqrt(std::max(0.0, 2.0 + 2.0 * std::cos(phi))); }

double f_pin(double x) { return std::sin(x) * (std::sin(x) + std::cos(x)); }

double abc1_expr(double x) {
    double s = std::sin(x);
    double term = std::cos(x) / s + s - 1.0;
    return s * s + term * term;
}

double R(double z) {
    if (std::abs(z) >= 1.0) throw DomainError("R: |z| must be < 1");
    return std::sqrt(1.0 - z * z);
}

double R1(double z) { return -z / std::pow(1.0 - z * z, 0.5); }
double R2(double z) { return -1.0 / std::pow(1.0 - z * z, 1.5); }
double R3(double z) { return -3.0 * z / std::pow(1.0 - z * z, 2.5); }

namespace {

void check_pair_domain(double z, double d, double b) {
    if (!(d > 0)) throw DomainError("f_ratio: d must be positive");
    if (!(z > b - 1.0) || !(z < 1.0)) throw DomainError("f_ratio: z outside (b - 1, 1)");
}

} // namespace

double f_ratio(double z, double d, double b) {
    check_pair_domain(z, d, b);
    return (R(z) + R(z - b)) / d;
}

double G(double z, double d, double b) {
    double f = f_ratio(z, d, b);
    if (f > 1.0) throw DomainError("G: f(z) > 1, arcsin undefined");
    return std::asin(f);
}

double G1(double z, double d, double b) {
    double f = f_ratio(z, d, b);
    double f1 = (R1(z) + R1(z - b)) / d;
    return f1 / std::sqrt(1.0 - f * f);
}

double G2(double z, double d, double b) {
    double f = f_ratio(z, d, b);
    double f1 = (R1(z) + R1(z - b)) / d;
    double f2 = (R2(z) + R2(z - b)) / d;
    double gnum = f2 * (1.0 - f * f) + f * f1 * f1;
    return gnum / std::pow(1.0 - f * f, 1.5);
}

double G2_fd(double z, double d, double b, double h) {
    auto second = [&](double step) {
        return (G(z + step, d, b) - 2.0 * G(z, d, b) + G(z - step, d, b)) / (step * step);
    };
    // Richardson extrapolation on the central difference
    double coarse = second(h);
    double fine = second(h / 2);
    return (4.0 * fine - coarse) / 3.0;
}

AngleFunctionTable make_angle_table(double d, double b, int n) {
    if (n < 2) throw InvalidInput("make_angle_table: need at least two samples");
    AngleFunctionTable t;
    t.d = d;
    t.b = b;
    double lo = b / 2 + 1e-3, hi = 1.0 - 1e-3;
    if (!(lo < hi)) throw DomainError("make_angle_table: empty grid interval");
    for (int i = 0; i < n; ++i) {
        double z = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        t.z.push_back(z);
        t.G.push_back(G(z, d, b));
        t.G1.push_back(G1(z, d, b));
        t.G2.push_back(G2(z, d, b));
    }
    return t;
}

GSuperadditivityReport scan_g_superadditivity(int n, double tolerance, double eq_tol) {
    GSuperadditivityReport rep;
    std::vector<double> grid(static_cast<std::size_t>(n));
    std::vector<bool> is_pi(static_cast<std::size_t>(n));
    std::vector<double> gv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
        grid[static_cast<std::size_t>(i)] = x;
        is_pi[static_cast<std::size_t>(i)] = std::abs(x - kPi) <= eq_tol;
        gv[static_cast<std::size_t>(i)] = g(x);
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                ++rep.cells;
                double lhs = g(grid[static_cast<std::size_t>(i)] + grid[static_cast<std::size_t>(j)] +
                               grid[static_cast<std::size_t>(k)]);
                double rhs = gv[static_cast<std::size_t>(i)] + gv[static_cast<std::size_t>(j)] +
                             gv[static_cast<std::size_t>(k)];
                double diff = lhs - rhs;
                if (diff > tolerance) {
                    ++rep.violations;
                    rep.max_violation = std::max(rep.max_violation, diff);
                }
                bool near_equal = std::abs(diff) <= eq_tol;
                if (near_equal) ++rep.equality_cells;
                int pis = (is_pi[static_cast<std::size_t>(i)] ? 1 : 0) +
                          (is_pi[static_cast<std::size_t>(j)] ? 1 : 0) +
                          (is_pi[static_cast<std::size_t>(k)] ? 1 : 0);
                if (near_equal != (pis >= 2)) ++rep.mismatched_flags;
            }
    return rep;
}

IntervalScanReport scan_pin_inequalities(std::int64_t points, double margin, double tolerance) {
    IntervalScanReport rep;
    rep.points = points;
    rep.min_f_margin = 1e300;
    rep.min_abc_margin = 1e300;
    double lo = kPi / 4 + margin, hi = kPi / 2 - margin;
    for (std::int64_t i = 0; i < points; ++i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        double fm = f_pin(x) - 1.0;
        double am = 1.0 - abc1_expr(x);
        rep.min_f_margin = std::min(rep.min_f_margin, fm);
        rep.min_abc_margin = std::min(rep.min_abc_margin, am);
        if (fm <= tolerance) ++rep.violations_f;
        if (am <= tolerance) ++rep.violations_abc;
    }
    return rep;
}

ConcavityReport scan_G_concavity(int pairs, int grid, std::uint64_t seed) {
    ConcavityReport rep;
    rep.max_g2 = -1e300;
    Rng rng(seed);
    for (int p = 0; p < pairs; ++p) {
        // disjoint pair with a safety margin: center distance in [2.1, 4]
        double b = rng.uniform(0.0, 1.9);
        double dist = rng.uniform(2.1, 4.0);
        double d = std::sqrt(std::max(0.25, dist * dist - b * b));
        ++rep.pairs;
        double lo = b / 2 + 1e-3, hi = 1.0 - 1e-3;
        for (int i = 0; i < grid; ++i) {
            double z = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid - 1);
            double g2 = G2_fd(z, d, b);
            ++rep.grid_points;
            rep.max_g2 = std::max(rep.max_g2, g2);
            if (g2 >= -1e-8) ++rep.violations;
        }
    }
    return rep;
}

} // namespace trv::fn
