#include "bvp/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bvp {

Problem Problem::make(WeightFunction w, Decomposition d, Expr g) {
    if (g.eval(0.0) != 0.0)
        throw std::runtime_error("shooting: g(0) must be exactly zero, got " +
                                 std::to_string(g.eval(0.0)));
    DecompositionCheck chk = validate_decomposition(w, d);
    if (!chk.pass)
        throw std::runtime_error("shooting: decomposition rejected: " + chk.violations.front());
    return Problem{std::move(w), std::move(d), std::move(g)};
}

namespace {

std::vector<double> dense_grid(double L, int m) {
    std::vector<double> pts(m - 1);
    for (int j = 1; j < m; ++j) pts[j - 1] = L * j / (m - 1);
    pts.back() = L;
    return pts;
}

}  // namespace

Trajectory integrate(const Problem& p, double slope, const Tolerances& tol) {
    const double L = p.w.length;
    Trajectory t;
    t.x.reserve(tol.output_points);
    t.u.reserve(tol.output_points);
    t.du.reserve(tol.output_points);
    t.x.push_back(0.0);
    t.u.push_back(0.0);
    t.du.push_back(slope);

    std::array<double, 2> y{0.0, slope};
    OdeOptions opt{tol.rtol, tol.atol};
    std::vector<double> grid = dense_grid(L, tol.output_points);

    auto rhs = [&p](double x, const std::array<double, 2>& s, std::array<double, 2>& ds) {
        ds[0] = s[1];
        ds[1] = -p.w.eval(x) * p.g_tilde(s[0]);
    };
    auto record = [&t](double x, const std::array<double, 2>& s) {
        t.x.push_back(x);
        t.u.push_back(s[0]);
        t.du.push_back(s[1]);
    };
    auto escape = [&tol](double, const std::array<double, 2>& s) {
        return std::fabs(s[0]) > tol.u_cap || std::fabs(s[1]) > 10.0 * tol.u_cap;
    };

    OdeOutcome res = integrate_dopri5(rhs, 0.0, L, y, opt, grid, record, escape);
    t.stats = res.stats;
    if (res.halted) {
        t.escaped = true;
        t.escape_x = res.x;
        t.escape_reason = std::fabs(y[0]) > tol.u_cap ? "|u| exceeded u_cap"
                                                      : "|u'| exceeded 10*u_cap";
    } else {
        t.terminal_u = y[0];
        t.terminal_du = y[1];
    }
    return t;
}

double shoot_value(const Problem& p, double slope, const Tolerances& tol) {
    std::array<double, 2> y{0.0, slope};
    OdeOptions opt{tol.rtol, tol.atol};
    auto rhs = [&p](double x, const std::array<double, 2>& s, std::array<double, 2>& ds) {
        ds[0] = s[1];
        ds[1] = -p.w.eval(x) * p.g_tilde(s[0]);
    };
    auto escape = [&tol](double, const std::array<double, 2>& s) {
        return std::fabs(s[0]) > tol.u_cap || std::fabs(s[1]) > 10.0 * tol.u_cap;
    };
    OdeOutcome res = integrate_dopri5(rhs, 0.0, p.w.length, y, opt, {},
                                      [](double, const std::array<double, 2>&) {}, escape);
    if (res.halted) return std::copysign(tol.u_cap, y[0]);
    return y[0];
}

std::vector<double> sweep_shoot_values_serial(const Problem& p, std::span<const double> slopes,
                                              const Tolerances& tol) {
    std::vector<double> out(slopes.size());
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        try {
            out[i] = shoot_value(p, slopes[i], tol);
        } catch (const IntegrationError&) {
            out[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return out;
}

std::vector<double> sweep_shoot_values(const Problem& p, std::span<const double> slopes,
                                       const Tolerances& tol) {
    std::vector<double> out(slopes.size());
    const auto n = static_cast<std::ptrdiff_t>(slopes.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = shoot_value(p, slopes[i], tol);
        } catch (const IntegrationError&) {
            out[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return out;
}

namespace {

// Interval membership for curvature checks: the whole central stencil must
// sit inside one sign interval, away from the hump/gap switch points.
struct SignIntervals {
    std::vector<double> lo, hi;   // humps
    std::vector<double> glo, ghi; // gaps (including leading/trailing)
};

SignIntervals sign_intervals(const Decomposition& d) {
    SignIntervals s;
    double prev = 0.0;
    for (int i = 0; i < d.humps(); ++i) {
        if (d.sigma[i] > prev) {
            s.glo.push_back(prev);
            s.ghi.push_back(d.sigma[i]);
        }
        s.lo.push_back(d.sigma[i]);
        s.hi.push_back(d.tau[i]);
        prev = d.tau[i];
    }
    if (d.length > prev) {
        s.glo.push_back(prev);
        s.ghi.push_back(d.length);
    }
    return s;
}

}  // namespace

std::optional<std::string> solution_defect(const Problem& p, const Trajectory& t,
                                           const Tolerances& tol) {
    if (t.escaped)
        return "escaped at x = " + std::to_string(t.escape_x) + " (" + t.escape_reason + ")";
    if (std::fabs(t.terminal_u) > tol.bc_tol)
        return "boundary residual |u(L)| = " + std::to_string(std::fabs(t.terminal_u)) +
               " exceeds bc_tol";
    if (!(t.du.front() > 0.0)) return "u'(0) is not positive";
    if (!(t.terminal_du < 0.0)) return "u'(L) is not negative";

    const std::size_t m = t.x.size();
    for (std::size_t j = 1; j + 1 < m; ++j)
        if (!(t.u[j] > 0.0))
            return "u(" + std::to_string(t.x[j]) + ") = " + std::to_string(t.u[j]) +
                   " violates interior positivity";

    // Concavity on humps, convexity on gaps, via divided second differences.
    SignIntervals si = sign_intervals(p.d);
    const double h = t.x[1] - t.x[0];
    for (std::size_t j = 1; j + 1 < m; ++j) {
        double d2 = (t.u[j + 1] - 2.0 * t.u[j] + t.u[j - 1]) / (h * h);
        double xl = t.x[j - 1], xr = t.x[j + 1];
        for (std::size_t k = 0; k < si.lo.size(); ++k)
            if (xl >= si.lo[k] && xr <= si.hi[k] && d2 > tol.curv_tol)
                return "convex at x = " + std::to_string(t.x[j]) +
                       " inside hump " + std::to_string(k + 1);
        for (std::size_t k = 0; k < si.glo.size(); ++k)
            if (xl >= si.glo[k] && xr <= si.ghi[k] && d2 < -tol.curv_tol)
                return "concave at x = " + std::to_string(t.x[j]) + " inside a gap";
    }
    return std::nullopt;
}

namespace {

Solution build_solution(const Problem& p, double slope, Trajectory t) {
    Solution s;
    s.slope = slope;
    s.boundary_residual = std::fabs(t.terminal_u);
    s.terminal_slope = t.terminal_du;
    double minu = std::numeric_limits<double>::infinity(), maxu = 0.0;
    for (std::size_t j = 1; j + 1 < t.u.size(); ++j) minu = std::fmin(minu, t.u[j]);
    for (double v : t.u) maxu = std::fmax(maxu, std::fabs(v));
    s.positivity_margin = minu;
    s.sup_norm = maxu;
    s.max_rel_residual = max_relative_residual(p, t);
    s.traj = std::move(t);
    return s;
}

}  // namespace

RootReport isolate_roots(const Problem& p, double d_min, double d_max, int grid,
                         const Tolerances& tol) {
    if (!(0.0 <= d_min && d_min < d_max))
        throw std::runtime_error("shooting: slope range must satisfy 0 <= d_min < d_max");
    if (grid < 2) throw std::runtime_error("shooting: slope grid too coarse");

    RootReport report;

    // Left endpoint excluded: d = d_min is either the trivial slope 0 or
    // covered by the previous bracket of a caller-chosen range.
    std::vector<double> slopes(grid);
    for (int j = 1; j <= grid; ++j) slopes[j - 1] = d_min + (d_max - d_min) * j / grid;
    std::vector<double> values = sweep_shoot_values(p, slopes, tol);

    for (int j = 0; j < grid; ++j)
        if (std::isnan(values[j]))
            report.rejected.push_back({slopes[j], "integration failed (step underflow)"});

    std::vector<double> roots;
    for (int j = 0; j + 1 < grid; ++j) {
        double fa = values[j], fb = values[j + 1];
        if (std::isnan(fa) || std::isnan(fb)) continue;
        if (fa == 0.0) {
            roots.push_back(slopes[j]);
            continue;
        }
        if (!(fa * fb < 0.0)) continue;
        double a = slopes[j], b = slopes[j + 1];
        double fmid = fa;
        while (b - a > 1e-13) {
            double mid = 0.5 * (a + b);
            if (mid == a || mid == b) break;
            fmid = shoot_value(p, mid, tol);
            if (std::fabs(fmid) <= tol.bc_tol) {
                a = b = mid;
                break;
            }
            if (fa * fmid < 0.0) {
                b = mid;
                fb = fmid;
            } else {
                a = mid;
                fa = fmid;
            }
        }
        roots.push_back(0.5 * (a + b));
    }
    if (!values.empty() && values.back() == 0.0) roots.push_back(slopes.back());

    // De-duplicate, validate, collect.
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique_roots;
    for (double r : roots)
        if (unique_roots.empty() || r - unique_roots.back() >= 1e-9) unique_roots.push_back(r);

    for (double r : unique_roots) {
        Trajectory t;
        try {
            t = integrate(p, r, tol);
        } catch (const IntegrationError& e) {
            report.rejected.push_back({r, std::string("integration failed: ") + e.what()});
            continue;
        }
        if (auto defect = solution_defect(p, t, tol)) {
            report.rejected.push_back({r, *defect});
            continue;
        }
        report.accepted.push_back(build_solution(p, r, std::move(t)));
    }
    return report;
}

double max_relative_residual(const Problem& p, const Trajectory& t) {
    const std::size_t m = t.x.size();
    if (m < 5) return 0.0;
    const double h = t.x[1] - t.x[0];

    // The weight's derivative jumps where humps meet gaps, so u is only C^2
    // there and the fourth-order stencil is not a valid u'' approximation on
    // a span containing such a point.  Those spans are excluded.
    std::vector<double> kinks;
    for (int k = 0; k < p.d.humps(); ++k) {
        if (p.d.sigma[k] > 0.0) kinks.push_back(p.d.sigma[k]);
        if (p.d.tau[k] < p.d.length) kinks.push_back(p.d.tau[k]);
    }
    auto spans_kink = [&](double x) {
        for (double k : kinks)
            if (std::fabs(x - k) <= 2.5 * h) return true;
        return false;
    };

    double worst = 0.0;
    for (std::size_t j = 2; j + 2 < m; ++j) {
        if (spans_kink(t.x[j])) continue;
        double d2 = (-t.u[j - 2] + 16.0 * t.u[j - 1] - 30.0 * t.u[j] + 16.0 * t.u[j + 1] -
                     t.u[j + 2]) /
                    (12.0 * h * h);
        double force = p.w.eval(t.x[j]) * p.g_tilde(t.u[j]);
        double res = std::fabs(d2 + force) / (1.0 + std::fabs(force));
        worst = std::fmax(worst, res);
    }
    return worst;
}

}  // namespace bvp
