#include "transversal/conjecture.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "transversal/constants.hpp"
#include "transversal/parallel.hpp"
#include "transversal/rng.hpp"
#include "transversal/vec.hpp"

namespace trv {

namespace {

constexpr std::int64_t kEvalsPerStart = 2048;

double hinge(double x) { return x > 0 ? x : 0.0; }

} // namespace

std::array<double, TangencySearchState::dim> TangencySearchState::flat() const {
    return {xb, xc, yc, xd, yd, zd, p1y, p1z, q1, r1, p2y, p2z, q2, r2};
}

TangencySearchState TangencySearchState::from_flat(const std::array<double, dim>& x) {
    TangencySearchState s;
    s.xb = x[0];
    s.xc = x[1];
    s.yc = x[2];
    s.xd = x[3];
    s.yd = x[4];
    s.zd = x[5];
    s.p1y = x[6];
    s.p1z = x[7];
    s.q1 = x[8];
    s.r1 = x[9];
    s.p2y = x[10];
    s.p2z = x[11];
    s.q2 = x[12];
    s.r2 = x[13];
    return s;
}

const std::vector<std::string>& TangencySearchState::names() {
    static const std::vector<std::string> n = {"xb",  "xc",  "yc", "xd", "yd",  "zd",  "p1y",
                                               "p1z", "q1",  "r1", "p2y", "p2z", "q2", "r2"};
    return n;
}

double merit_tangency(const TangencySearchState& s) {
    const Vec3 a{0, 0, 0}, b{s.xb, 0, 0}, c{s.xc, s.yc, 0}, d{s.xd, s.yd, s.zd};
    const Vec3 centers[4] = {a, b, c, d};

    double worst = 0;
    // non-overlap
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            worst = std::max(worst, hinge(4.0 - (centers[i] - centers[j]).norm2()));

    // transversality (tangency relaxed to dist <= 1)
    const Vec3 anchor1{0, s.p1y, s.p1z}, dir1{1, s.q1, s.r1};
    const Vec3 anchor2{0, s.p2y, s.p2z}, dir2{1, s.q2, s.r2};
    auto line_residual = [&](const Vec3& anchor, const Vec3& dir) {
        double dn2 = dir.norm2();
        double m = 0;
        for (const Vec3& p : centers) {
            Vec3 w = p - anchor;
            double t = w.dot(dir);
            double d2 = w.norm2() - t * t / dn2;
            m = std::max(m, hinge(d2 - 1.0));
        }
        return m;
    };
    worst = std::max(worst, line_residual(anchor1, dir1));
    worst = std::max(worst, line_residual(anchor2, dir2));

    // orders: ABCD along line 1, ACDB along line 2
    worst = std::max(worst, hinge(-dir1.dot(b - a)));
    worst = std::max(worst, hinge(-dir1.dot(c - b)));
    worst = std::max(worst, hinge(-dir1.dot(d - c)));
    worst = std::max(worst, hinge(-dir2.dot(c - a)));
    worst = std::max(worst, hinge(-dir2.dot(d - c)));
    worst = std::max(worst, hinge(-dir2.dot(b - d)));
    return worst;
}

std::array<double, PinningSearchState::dim> PinningSearchState::flat() const {
    return {h, t[0], t[1], t[2], t[3], hp, tp[0], tp[1], tp[2], tp[3], u};
}

PinningSearchState PinningSearchState::from_flat(const std::array<double, dim>& x) {
    PinningSearchState s;
    s.h = x[0];
    s.t = {x[1], x[2], x[3], x[4]};
    s.hp = x[5];
    s.tp = {x[6], x[7], x[8], x[9]};
    s.u = x[10];
    return s;
}

const std::vector<std::string>& PinningSearchState::names() {
    static const std::vector<std::string> n = {"h",  "ta",  "tb",  "tc",  "td", "hp",
                                               "tap", "tbp", "tcp", "tdp", "u"};
    return n;
}

namespace {

void check_denominators(const PinningSearchState& s) {
    for (double t : s.t)
        if (std::abs(1.0 - t * t) < tol::geom)
            throw DegenerateParameter("pinning state with 1 - t^2 ~ 0");
    for (double t : s.tp)
        if (std::abs(1.0 - t * t) < tol::geom)
            throw DegenerateParameter("pinning state with 1 - t'^2 ~ 0");
}

Vec3 hyper_center(double h, double t) {
    return {2 * h * t / (1 - t * t), (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)};
}

// squared center distances for the six pairs, in the fixed order
// (a,b) (a,c) (a,d) (b,c) (b,d) (c,d)
std::array<double, 6> pair_distances2(double h, const std::array<double, 4>& t) {
    Vec3 c[4];
    for (int i = 0; i < 4; ++i) c[i] = hyper_center(h, t[static_cast<std::size_t>(i)]);
    std::array<double, 6> out{};
    int k = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) out[static_cast<std::size_t>(k++)] = (c[i] - c[j]).norm2();
    return out;
}

} // namespace

std::vector<double> pinning_equality_residuals(const PinningSearchState& s) {
    check_denominators(s);
    std::array<double, 6> d = pair_distances2(s.h, s.t);
    std::array<double, 6> dp = pair_distances2(s.hp, s.tp);
    std::vector<double> out;
    out.reserve(7);
    for (int k = 0; k < 6; ++k) out.push_back(d[static_cast<std::size_t>(k)] - dp[static_cast<std::size_t>(k)]);
    out.push_back(s.u * s.h * s.hp - 1.0);
    return out;
}

double merit_pinning(const PinningSearchState& s) {
    std::vector<double> eq = pinning_equality_residuals(s);
    double worst = 0;
    for (double r : eq) worst = std::max(worst, std::abs(r));
    // orderings: ABCD on the unprimed configuration, ACDB on the primed one
    worst = std::max(worst, hinge(s.t[0] - s.t[1]));
    worst = std::max(worst, hinge(s.t[1] - s.t[2]));
    worst = std::max(worst, hinge(s.t[2] - s.t[3]));
    worst = std::max(worst, hinge(s.tp[0] - s.tp[2]));
    worst = std::max(worst, hinge(s.tp[2] - s.tp[3]));
    worst = std::max(worst, hinge(s.tp[3] - s.tp[1]));
    // non-overlap on the unprimed configuration
    std::array<double, 6> d = pair_distances2(s.h, s.t);
    for (double v : d) worst = std::max(worst, hinge(4.0 - v));
    return worst;
}

namespace {

struct SearchProblem {
    std::size_t dim;
    // sample a start; must depend only on (seed, start index)
    std::vector<double> (*sample)(Rng&);
    // clamp a candidate into the admissible box
    void (*clamp)(std::vector<double>&);
    double (*merit)(const std::vector<double>&);
};

struct StartOutcome {
    double merit = std::numeric_limits<double>::infinity();
    std::vector<double> state;
    std::int64_t evals = 0;
};

// deterministic first-improvement pattern search
StartOutcome run_start(const SearchProblem& prob, std::uint64_t seed, std::int64_t start_index,
                       std::int64_t eval_budget) {
    Rng rng(seed, 7777 + static_cast<std::uint64_t>(start_index));
    StartOutcome out;
    out.state = prob.sample(rng);
    prob.clamp(out.state);
    if (eval_budget <= 0) return out;
    out.merit = prob.merit(out.state);
    out.evals = 1;

    double step = 0.25;
    while (step > 1e-12 && out.evals < eval_budget) {
        bool improved = false;
        for (std::size_t v = 0; v < prob.dim && out.evals < eval_budget; ++v) {
            for (double sgn : {+1.0, -1.0}) {
                if (out.evals >= eval_budget) break;
                std::vector<double> cand = out.state;
                cand[v] += sgn * step;
                prob.clamp(cand);
                double m = prob.merit(cand);
                ++out.evals;
                if (m < out.merit) {
                    out.merit = m;
                    out.state = cand;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
        if (out.merit == 0) break;
    }
    return out;
}

SearchReport run_search(const SearchProblem& prob, const std::string& formulation,
                        const std::vector<std::string>& names, std::int64_t budget,
                        std::uint64_t seed, int threads) {
    if (budget < 1) throw InvalidInput("search budget must be >= 1");
    auto t0 = std::chrono::steady_clock::now();

    std::int64_t starts = (budget + kEvalsPerStart - 1) / kEvalsPerStart;
    std::vector<StartOutcome> outcomes(static_cast<std::size_t>(starts));
    parallel_for(starts, threads, [&](std::int64_t k, int) {
        std::int64_t mine = std::min<std::int64_t>(kEvalsPerStart, budget - k * kEvalsPerStart);
        outcomes[static_cast<std::size_t>(k)] = run_start(prob, seed, k, mine);
    });

    SearchReport rep;
    rep.formulation = formulation;
    rep.state_names = names;
    rep.seed = seed;
    rep.budget = budget;
    rep.starts = starts;
    std::size_t best = 0;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        rep.samples_evaluated += outcomes[k].evals;
        if (outcomes[k].merit < outcomes[best].merit) best = k;
    }
    rep.best_state = outcomes[best].state;
    // recompute at report time
    rep.best_violation = prob.merit(rep.best_state);
    rep.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// --- tangency formulation boxes ---

std::vector<double> tangency_sample(Rng& rng) {
    std::vector<double> x(TangencySearchState::dim);
    // centers within a side-12 box (a at the origin); lines near the hull
    x[0] = rng.uniform(0.0, 6.0);
    for (int i = 1; i < 6; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(-6.0, 6.0);
    for (int i = 6; i < 14; ++i) x[static_cast<std::size_t>(i)] = rng.uniform(-3.0, 3.0);
    return x;
}

void tangency_clamp(std::vector<double>& x) {
    x[0] = std::clamp(x[0], -6.0, 6.0);
    for (int i = 1; i < 6; ++i) x[static_cast<std::size_t>(i)] = std::clamp(x[static_cast<std::size_t>(i)], -6.0, 6.0);
    for (int i = 6; i < 14; ++i) x[static_cast<std::size_t>(i)] = std::clamp(x[static_cast<std::size_t>(i)], -3.0, 3.0);
}

double tangency_merit(const std::vector<double>& x) {
    std::array<double, TangencySearchState::dim> a{};
    std::copy(x.begin(), x.end(), a.begin());
    return merit_tangency(TangencySearchState::from_flat(a));
}

// --- pinning formulation boxes ---

double sample_t(Rng& rng) {
    for (;;) {
        double t = rng.uniform(-10.0, 10.0);
        if (std::abs(std::abs(t) - 1.0) > 0.05) return t;
    }
}

std::vector<double> pinning_sample(Rng& rng) {
    std::vector<double> x(PinningSearchState::dim);
    auto sample_h = [&](void) {
        double v = rng.uniform(1e-2, 5.0);
        return rng.next_double() < 0.5 ? -v : v;
    };
    x[0] = sample_h();
    for (int i = 1; i <= 4; ++i) x[static_cast<std::size_t>(i)] = sample_t(rng);
    x[5] = sample_h();
    for (int i = 6; i <= 9; ++i) x[static_cast<std::size_t>(i)] = sample_t(rng);
    std::sort(x.begin() + 1, x.begin() + 5); // start with the ABCD ordering satisfied
    double hh = x[0] * x[5];
    x[10] = std::abs(hh) > 1e-8 ? 1.0 / hh : 1.0;
    return x;
}

void pinning_clamp(std::vector<double>& x) {
    auto clamp_h = [](double v) {
        double s = v < 0 ? -1.0 : 1.0;
        return s * std::clamp(std::abs(v), 1e-2, 5.0);
    };
    auto clamp_t = [](double v) {
        v = std::clamp(v, -10.0, 10.0);
        // keep out of the +-1 chart boundaries
        if (std::abs(v - 1.0) < 0.02) v = v < 1.0 ? 0.98 : 1.02;
        if (std::abs(v + 1.0) < 0.02) v = v < -1.0 ? -1.02 : -0.98;
        return v;
    };
    x[0] = clamp_h(x[0]);
    x[5] = clamp_h(x[5]);
    for (int i : {1, 2, 3, 4, 6, 7, 8, 9}) x[static_cast<std::size_t>(i)] = clamp_t(x[static_cast<std::size_t>(i)]);
    x[10] = std::clamp(x[10], -1e4, 1e4);
}

double pinning_merit(const std::vector<double>& x) {
    std::array<double, PinningSearchState::dim> a{};
    std::copy(x.begin(), x.end(), a.begin());
    return merit_pinning(PinningSearchState::from_flat(a));
}

int jacobian_rank_at(const std::vector<double>& x) {
    std::array<double, PinningSearchState::dim> a{};
    std::copy(x.begin(), x.end(), a.begin());
    PinningSearchState s0 = PinningSearchState::from_flat(a);
    std::vector<double> base = pinning_equality_residuals(s0);
    const double h = 1e-6;
    Eigen::MatrixXd J(7, 11);
    for (int v = 0; v < 11; ++v) {
        auto xp = a;
        xp[static_cast<std::size_t>(v)] += h;
        std::vector<double> rp = pinning_equality_residuals(PinningSearchState::from_flat(xp));
        for (int r = 0; r < 7; ++r) J(r, v) = (rp[static_cast<std::size_t>(r)] - base[static_cast<std::size_t>(r)]) / h;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    auto sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol::rank * std::max(sv(0), 1e-300)) ++rank;
    return rank;
}

} // namespace

SearchReport search_tangency(std::int64_t budget, std::uint64_t seed, int threads) {
    SearchProblem prob{TangencySearchState::dim, &tangency_sample, &tangency_clamp,
                       &tangency_merit};
    return run_search(prob, "tangency", TangencySearchState::names(), budget, seed, threads);
}

SearchReport search_pinning(std::int64_t budget, std::uint64_t seed, int threads) {
    SearchProblem prob{PinningSearchState::dim, &pinning_sample, &pinning_clamp, &pinning_merit};
    SearchReport rep =
        run_search(prob, "pinning", PinningSearchState::names(), budget, seed, threads);
    try {
        rep.equality_jacobian_rank = jacobian_rank_at(rep.best_state);
    } catch (const Error&) {
        rep.equality_jacobian_rank = -1;
    }
    return rep;
}

DistanceFraction hyperboloidal_distance2_fraction(std::size_t nvars, std::size_t var_h,
                                                  std::size_t var_tw, std::size_t var_tv) {
    const Poly one = Poly::constant(nvars, Rational(1));
    const Poly four = Poly::constant(nvars, Rational(4));
    const Poly h = Poly::variable(nvars, var_h);
    const Poly tw = Poly::variable(nvars, var_tw);
    const Poly tv = Poly::variable(nvars, var_tv);

    const Poly dm = tw - tv;                  // t_w - t_v
    const Poly cross = one + tw * tv;         // 1 + t_w t_v
    const Poly mw = one - tw * tw, mv = one - tv * tv;
    const Poly pw = one + tw * tw, pv = one + tv * tv;

    // |wv|^2 = 4 (t_w - t_v)^2 [ h^2 (1 + t_w t_v)^2 (1+t_w^2)(1+t_v^2)
    //                            + (1-t_w^2)^2 (1-t_v^2)^2 ]
    //          / [ (1-t_w^2)^2 (1-t_v^2)^2 (1+t_w^2)(1+t_v^2) ]
    DistanceFraction f{Poly(nvars), Poly(nvars)};
    f.num = four * dm.pow(2) *
            (h.pow(2) * cross.pow(2) * pw * pv + mw.pow(2) * mv.pow(2));
    f.den = mw.pow(2) * mv.pow(2) * pw * pv;
    return f;
}

PolynomialSystem build_pinning_system() {
    PolynomialSystem sys;
    sys.title = "pinning-conditions system: two isometric hyperboloidal quadruples, orders "
                "ABCD and ACDB";
    sys.variables = PinningSearchState::names(); // h ta tb tc td hp tap tbp tcp tdp u
    const std::size_t n = sys.variables.size();

    auto var = [&](const std::string& name) {
        auto it = std::find(sys.variables.begin(), sys.variables.end(), name);
        return static_cast<std::size_t>(it - sys.variables.begin());
    };
    const std::size_t H = var("h"), HP = var("hp"), U = var("u");
    const std::array<std::size_t, 4> T{var("ta"), var("tb"), var("tc"), var("td")};
    const std::array<std::size_t, 4> TP{var("tap"), var("tbp"), var("tcp"), var("tdp")};
    const char* ball_names = "abcd";

    // saturation first: u*h*hp = 1 guards against the degenerate h h' = 0 locus
    {
        PolynomialSystem::Constraint c;
        c.name = "saturation";
        c.poly = Poly::variable(n, U) * Poly::variable(n, H) * Poly::variable(n, HP) -
                 Poly::constant(n, Rational(1));
        c.degree = c.poly.total_degree();
        sys.equalities.push_back(std::move(c));
    }

    // six cleared distance matches |wv|^2 = |w'v'|^2
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
            DistanceFraction f = hyperboloidal_distance2_fraction(n, H, T[i], T[j]);
            DistanceFraction fp = hyperboloidal_distance2_fraction(n, HP, TP[i], TP[j]);
            PolynomialSystem::Constraint c;
            c.name = std::string("dist_") + ball_names[i] + ball_names[j];
            c.poly = f.num * fp.den - fp.num * f.den;
            c.degree = c.poly.total_degree();
            sys.equalities.push_back(std::move(c));
        }

    // strict orderings: ABCD on the unprimed, ACDB on the primed configuration
    auto order_ineq = [&](const std::string& name, std::size_t lo, std::size_t hi) {
        PolynomialSystem::Constraint c;
        c.name = name;
        c.poly = Poly::variable(n, hi) - Poly::variable(n, lo);
        c.kind = PolynomialSystem::Kind::greater;
        c.degree = 1;
        sys.inequalities.push_back(std::move(c));
    };
    order_ineq("order_ab", T[0], T[1]);
    order_ineq("order_bc", T[1], T[2]);
    order_ineq("order_cd", T[2], T[3]);
    order_ineq("order_ac_p", TP[0], TP[2]);
    order_ineq("order_cd_p", TP[2], TP[3]);
    order_ineq("order_db_p", TP[3], TP[1]);

    // non-overlap on the unprimed configuration (the primed copies are
    // redundant for isometric configurations): num - 4 den >= 0
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
            DistanceFraction f = hyperboloidal_distance2_fraction(n, H, T[i], T[j]);
            PolynomialSystem::Constraint c;
            c.name = std::string("overlap_") + ball_names[i] + ball_names[j];
            c.poly = f.num - Poly::constant(n, Rational(4)) * f.den;
            c.kind = PolynomialSystem::Kind::greater_equal;
            c.degree = c.poly.total_degree();
            sys.inequalities.push_back(std::move(c));
        }

    return sys;
}

} // namespace trv
