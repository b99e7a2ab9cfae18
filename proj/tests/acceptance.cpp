// Acceptance harness: each numbered criterion prints one [PASS]/[FAIL] line
// and the exit code is the number of failures.
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bvp/eigen.hpp"
#include "bvp/expr.hpp"
#include "bvp/multiplicity.hpp"
#include "bvp/radial.hpp"
#include "bvp/shooting.hpp"
#include "bvp/weights.hpp"
#include "oracles.hpp"

using namespace bvp;

namespace {

const double pi = std::numbers::pi;
int failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
    if (!ok) ++failures;
}

template <class F>
void criterion(int n, F f) {
    try {
        auto [ok, detail] = f();
        report(n, ok, detail);
    } catch (const std::exception& e) {
        report(n, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

Problem two_hump_problem(double mu = 0.5) {
    WeightFunction w = WeightFunction::from_expr(Expr::parse("sin(3*pi*x)", "x"), mu, 1.0);
    return Problem::make(w, decompose(w), Expr::parse("max(0,100*s*atan(abs(s)))", "s"));
}

SignatureMask mask_of(const std::vector<int>& indices) {
    SignatureMask m = 0;
    for (int i : indices) m |= SignatureMask{1} << (i - 1);
    return m;
}

double positive_part(double x) { return std::fmax(std::sin(3.0 * pi * x), 0.0); }

// theta(L) brackets pi at lambda*(1 -/+ rel) iff the reference eigenvalue is
// within rel of lambda; the angle is strictly increasing in lambda.
template <class Q>
bool oracle_confirms(const Q& q, double x_lo, double x_hi, double lambda, double rel) {
    double below = oracle::prufer_angle_rich(q, x_lo, x_hi, lambda * (1.0 - rel), 500000);
    double above = oracle::prufer_angle_rich(q, x_lo, x_hi, lambda * (1.0 + rel), 500000);
    return below < pi && pi < above;
}

}  // namespace

int main() {
    // The three-solution configuration is shared by criteria 1, 2, 7 and 9.
    std::optional<Problem> fig;
    std::optional<MultiplicityReport> fig_report;
    double fig_seconds = 0.0;
    try {
        fig = two_hump_problem();
        auto t0 = std::chrono::steady_clock::now();
        fig_report = solve_all(*fig, SlopeRange{0.0, 5.0, 500}, RPolicy{}, Tolerances{});
        fig_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    } catch (const std::exception& e) {
        std::printf("setup failed: %s\n", e.what());
    }

    criterion(1, [&]() -> std::pair<bool, std::string> {
        if (!fig_report) return {false, "solve did not complete"};
        const MultiplicityReport& rep = *fig_report;
        bool ok = rep.count == 3 && fig_seconds < 10.0;
        for (const Solution& s : rep.solutions) {
            if (s.boundary_residual > 1e-8) ok = false;
            if (!(s.positivity_margin > 0.0)) ok = false;
            if (!(s.slope > 0.0 && s.terminal_slope < 0.0)) ok = false;
        }
        return {ok, fmt(rep.count) + " validated positive solutions in " + fmt(fig_seconds) +
                        " s; each has |u(L)| <= 1e-8, interior positivity, u'(0) > 0 > u'(L)"};
    });

    criterion(2, [&]() -> std::pair<bool, std::string> {
        if (!fig_report) return {false, "solve did not complete"};
        const MultiplicityReport& rep = *fig_report;
        std::set<SignatureMask> seen;
        bool ambiguous = false;
        for (const Solution& s : rep.solutions) {
            seen.insert(mask_of(s.signature));
            ambiguous = ambiguous || s.signature_ambiguous;
        }
        bool ok = seen == std::set<SignatureMask>{0b01, 0b10, 0b11} && !ambiguous;
        return {ok, "signatures {1}, {2}, {1,2} with r = " + fmt(rep.r_used) +
                        " (delta = 0.1*lambda0), none ambiguous"};
    });

    criterion(3, [&]() -> std::pair<bool, std::string> {
        bool ok = true;
        for (double L : {1.0, 0.5, 1.0 / 3.0}) {
            EigenProblem p = EigenProblem::make([](double) { return 1.0; }, 0.0, L);
            double lam = first_eigenvalue(p);
            double expect = (pi / L) * (pi / L);
            if (std::fabs(lam - expect) > 1e-8 * expect) ok = false;
        }
        return {ok, "constant-weight eigenvalue equals (pi/L)^2 for L = 1, 1/2, 1/3 "
                    "within 1e-8 relative"};
    });

    criterion(4, [&]() -> std::pair<bool, std::string> {
        // Step weight on [0, pi]: 1 outside the notch (pi/2 - eps, pi/2 + eps),
        // 0 inside.  At eps = pi/6 one hump has length pi/3, eigenvalue 9.
        EigenProblem hump = EigenProblem::make([](double) { return 1.0; }, 0.0, pi / 3.0);
        double lam_hump = first_eigenvalue(hump);
        bool ok = std::fabs(lam_hump - 9.0) <= 1e-7;

        const double eps = 0.01;
        EigenProblem merged = EigenProblem::make(
            [eps](double x) { return std::fabs(x - pi / 2.0) > eps ? 1.0 : 0.0; }, 0.0, pi);
        double lam_merged = first_eigenvalue(merged);
        if (!(lam_merged > 1.0 && lam_merged < 4.0)) ok = false;
        return {ok, "hump eigenvalue " + fmt(lam_hump) + " (target 9 within 1e-7); merged "
                        "notched-weight eigenvalue " + fmt(lam_merged) + " < 4"};
    });

    criterion(5, [&]() -> std::pair<bool, std::string> {
        auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        for (int n = 1; n <= 10; ++n)
            if (!degree_bookkeeping_check(n)) ok = false;
        for (SignatureMask m : {0u, 1u, 3u, 5u, 7u, 1023u}) {
            int expect = std::popcount(m) % 2 == 0 ? 1 : -1;
            if (predicted_degree(m) != expect) ok = false;
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (sec >= 1.0) ok = false;
        return {ok, "degree parity and subset cancellation exact for n <= 10 in " +
                        fmt(sec * 1e3) + " ms"};
    });

    criterion(6, [&]() -> std::pair<bool, std::string> {
        if (!fig) return {false, "setup failed"};
        HypothesisReport h = check_hypotheses(fig->w, fig->d, fig->g);
        double max_l1 = 0.0;
        for (double l : h.lambda1) max_l1 = std::fmax(max_l1, l);

        bool ok = h.pass;
        if (!(h.g0_estimate <= 1e-5 && h.g0_estimate < h.lambda0)) ok = false;
        if (std::fabs(h.ginf_estimate - 50.0 * pi) > 1e-3 * 50.0 * pi) ok = false;
        if (!(h.ginf_estimate > max_l1)) ok = false;

        if (!oracle_confirms(positive_part, 0.0, 1.0, h.lambda0, 1e-6)) ok = false;
        if (h.lambda1.size() != 2) ok = false;
        for (std::size_t i = 0; i < h.lambda1.size() && i < 2; ++i) {
            double lo = fig->d.sigma[i], hi = fig->d.tau[i];
            if (!oracle_confirms(positive_part, lo, hi, h.lambda1[i], 1e-6)) ok = false;
        }
        return {ok, "g0 = " + fmt(h.g0_estimate) + " <= 1e-5 < lambda0 = " + fmt(h.lambda0) +
                        "; ginf = " + fmt(h.ginf_estimate) + " = 50*pi (0.1%) > max lambda1 = " +
                        fmt(max_l1) + "; eigenvalues confirmed by reference angle brackets "
                        "at 1e-6 relative"};
    });

    criterion(7, [&]() -> std::pair<bool, std::string> {
        if (!fig) return {false, "setup failed"};
        const std::vector<double> mus = {0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
        SweepReport sweep = sweep_mu(*fig, mus, SlopeRange{}, RPolicy{}, Tolerances{});
        if (!sweep.mu_hat) return {false, "no grid mu reached full signature coverage"};
        double mu_hat = *sweep.mu_hat;

        bool ok = true;
        for (double scale : {2.0, 4.0}) {
            Problem p = two_hump_problem(scale * mu_hat);
            MultiplicityReport rep = solve_all(p, SlopeRange{}, RPolicy{}, Tolerances{});
            if (!rep.prediction_met) ok = false;
        }
        return {ok, "full coverage first at mu = " + fmt(mu_hat) + " and preserved at mu = " +
                        fmt(2.0 * mu_hat) + " and mu = " + fmt(4.0 * mu_hat)};
    });

    criterion(8, [&]() -> std::pair<bool, std::string> {
        AnnulusProblem ap{2, 1.0, std::numbers::e, Expr::parse("1+0*r", "r"), 1.0,
                          Expr::parse("s^3", "s")};
        Problem p = transform(ap);
        Tolerances tol;
        RootReport roots = isolate_roots(p, 0.0, 10.0, 500, tol);
        if (roots.accepted.empty()) return {false, "no annulus solution found"};

        bool ok = true;
        double worst = 0.0;
        auto flat = [](double) { return 1.0; };
        auto cube = [](double v) { return v > 0.0 ? v * v * v : 0.0; };
        for (const Solution& sol : roots.accepted) {
            RadialSolution rs = back_map(ap, p, sol, tol);
            std::vector<double> v, dv;
            oracle::radial_shoot(2, flat, cube, rs.r, sol.slope, 100, v, dv);
            for (std::size_t j = 0; j < rs.r.size(); ++j)
                worst = std::fmax(worst, std::fabs(rs.v[j] - v[j]));
        }
        if (worst > 1e-6) ok = false;

        // Chain rule on a manufactured profile: u(t) = v(r(t)) must satisfy
        // u'' = r^{2(dim-1)} (v'' + (dim-1)/r v') with the built weight equal
        // to r^{2(dim-1)} A(r(t)).
        double chain_worst = 0.0;
        for (int dim : {2, 3}) {
            const double R1 = 1.0, R2 = (dim == 2) ? std::numbers::e : 2.0;
            AnnulusProblem m{dim, R1, R2, Expr::parse("2+cos(r)", "r"), 1.0,
                             Expr::parse("s^3", "s")};
            Problem pm = transform(m);
            const double L = pm.w.length;
            const double k = pi / (R2 - R1);
            auto u = [&](double t) { return std::sin(k * (h_inverse(dim, R1, t) - R1)); };
            const double h = 1e-3 * L;
            for (int j = 0; j <= 400; ++j) {
                double t = 2.0 * h + (L - 4.0 * h) * j / 400;
                double r = h_inverse(dim, R1, t);
                double rp = std::pow(r, 2.0 * (dim - 1));
                double u_dd = (-u(t - 2 * h) + 16.0 * u(t - h) - 30.0 * u(t) +
                               16.0 * u(t + h) - u(t + 2 * h)) /
                              (12.0 * h * h);
                double rhs = rp * (-k * k * std::sin(k * (r - R1)) +
                                   (dim - 1) / r * k * std::cos(k * (r - R1)));
                chain_worst = std::fmax(chain_worst,
                                        std::fabs(u_dd - rhs) / (1.0 + std::fabs(rhs)));
                double w_exact = rp * (2.0 + std::cos(r));
                chain_worst = std::fmax(chain_worst,
                                        std::fabs(pm.w.eval(t) - w_exact) / w_exact);
            }
        }
        if (chain_worst > 1e-8) ok = false;
        return {ok, "back-mapped annulus solutions within " + fmt(worst) +
                        " of direct radial integration (bound 1e-6); chain-rule deviation " +
                        fmt(chain_worst) + " (bound 1e-8)"};
    });

    criterion(9, [&]() -> std::pair<bool, std::string> {
        if (!fig || !fig_report) return {false, "setup failed"};
        bool ok = true;

        // Concave on humps, convex on gaps, away from the sign-change points.
        const Decomposition& d = fig->d;
        for (const Solution& s : fig_report->solutions) {
            if (s.max_rel_residual > 1e-6) ok = false;
            for (std::size_t j = 1; j + 1 < s.traj.x.size(); ++j) {
                double x = s.traj.x[j];
                double dd = s.traj.u[j - 1] - 2.0 * s.traj.u[j] + s.traj.u[j + 1];
                bool on_hump = false, on_gap = true;
                for (int i = 0; i < d.humps(); ++i) {
                    if (x > d.sigma[i] + 0.02 && x < d.tau[i] - 0.02) on_hump = true;
                    if (x > d.sigma[i] - 0.02 && x < d.tau[i] + 0.02) on_gap = false;
                }
                if (on_hump && dd > 1e-12) ok = false;
                if (on_gap && dd < -1e-12) ok = false;
            }
        }

        // Halving the integrator tolerances moves no root by more than 1e-7.
        Tolerances tight;
        tight.rtol /= 2.0;
        tight.atol /= 2.0;
        RootReport refined = isolate_roots(*fig, 0.0, 5.0, 500, tight);
        if (refined.accepted.size() != fig_report->solutions.size()) ok = false;
        for (std::size_t k = 0; k < refined.accepted.size() && k < fig_report->solutions.size();
             ++k) {
            double a = refined.accepted[k].slope, b = fig_report->solutions[k].slope;
            if (std::fabs(a - b) > 1e-7 * std::fabs(b)) ok = false;
        }

        // Parser identities: precedence, functions, and source round trips.
        if (Expr::parse("2+3*4", "x").eval(0.0) != 14.0) ok = false;
        if (Expr::parse("2^3^2", "x").eval(0.0) != 512.0) ok = false;
        if (Expr::parse("0-2^2", "x").eval(0.0) != -4.0) ok = false;
        if (Expr::parse("(2+3)*4", "x").eval(0.0) != 20.0) ok = false;
        if (Expr::parse("2*3^2", "x").eval(0.0) != 18.0) ok = false;
        if (Expr::parse("7-3-2", "x").eval(0.0) != 2.0) ok = false;
        if (std::fabs(Expr::parse("sin(pi/6)", "x").eval(0.0) - 0.5) > 1e-12) ok = false;
        Expr round_trip = Expr::parse("((1+2)*x-4)/5+x^(1/2)", "x");
        for (double x : {0.25, 1.0, 2.5}) {
            double direct = ((1.0 + 2.0) * x - 4.0) / 5.0 + std::sqrt(x);
            if (std::fabs(round_trip.eval(x) - direct) > 1e-15 * std::fabs(direct)) ok = false;
            Expr again = Expr::parse(round_trip.source(), "x");
            if (again.eval(x) != round_trip.eval(x)) ok = false;
        }

        return {ok, "curvature signs per sign interval, residuals <= 1e-6, root drift "
                    "<= 1e-7 under tolerance halving, parser identities exact"};
    });

    std::printf("%d criteria failed\n", failures);
    return failures;
}
