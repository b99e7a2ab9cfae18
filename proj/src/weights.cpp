#include "bvp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bvp {

WeightFunction WeightFunction::from_expr(const Expr& a, double mu, double length) {
    if (!(length > 0.0)) throw std::runtime_error("weights: domain length must be positive");
    if (!(mu >= 0.0)) throw std::runtime_error("weights: mu must be non-negative");
    WeightFunction w;
    w.base = [a](double x) { return a.eval(x); };
    w.mu = mu;
    w.length = length;
    w.source = a.source();
    return w;
}

double WeightFunction::base_value(double x) const {
    double slack = 1e-12 * std::fmax(1.0, length);
    if (x < -slack || x > length + slack)
        throw std::runtime_error("weights: x = " + std::to_string(x) + " outside [0, " +
                                 std::to_string(length) + "]");
    return base(std::clamp(x, 0.0, length));
}

double WeightFunction::positive_part(double x) const { return std::fmax(base_value(x), 0.0); }

double WeightFunction::negative_part(double x) const { return std::fmax(-base_value(x), 0.0); }

double WeightFunction::eval(double x) const {
    double a = base_value(x);
    return std::fmax(a, 0.0) - mu * std::fmax(-a, 0.0);
}

namespace {

int classify(double a, double sign_tol) {
    if (a > sign_tol) return 1;
    if (a < -sign_tol) return -1;
    return 0;
}

// Boundary between a point on the >= -sign_tol side and one where the base is
// < -sign_tol.  Bisects on the strict sign so a simple zero is located to
// 1e-13, and returns the non-negative end of the final bracket: the hump side
// then satisfies a >= 0 at the boundary instead of straddling it.  When the
// ok-side sample is already slightly negative (inside the tolerance band)
// there is no strict sign change to find and the sample itself is the edge.
double refine_boundary(const WeightFunction& w, double x_ok, double x_neg) {
    if (w.base_value(x_ok) < 0.0) return x_ok;
    for (int it = 0; it < 200 && std::fabs(x_neg - x_ok) > 1e-13; ++it) {
        double mid = 0.5 * (x_ok + x_neg);
        if (w.base_value(mid) < 0.0)
            x_neg = mid;
        else
            x_ok = mid;
    }
    return x_ok;
}

}  // namespace

Decomposition decompose(const WeightFunction& w, double sign_tol, int grid) {
    if (grid < 16) throw std::runtime_error("weights: sampling grid too coarse");
    const double L = w.length;
    const int n = grid;

    std::vector<double> x(n + 1), a(n + 1);
    std::vector<int> cls(n + 1);
    for (int i = 0; i <= n; ++i) {
        x[i] = L * i / n;
        a[i] = w.base_value(x[i]);
        cls[i] = classify(a[i], sign_tol);
    }

    // Maximal strictly-negative runs become gap cores; boundaries refined.
    struct Gap { double lo, hi; };
    std::vector<Gap> gaps;
    int i = 0;
    while (i <= n) {
        if (cls[i] != -1) { ++i; continue; }
        int j = i;
        while (j <= n && cls[j] == -1) ++j;
        double lo = (i == 0) ? 0.0 : refine_boundary(w, x[i - 1], x[i]);
        double hi = (j > n) ? L : refine_boundary(w, x[j], x[j - 1]);
        gaps.push_back({lo, hi});
        i = j;
    }

    auto has_positive_sample = [&](double lo, double hi) {
        for (int k = 0; k <= n; ++k)
            if (x[k] > lo && x[k] < hi && cls[k] == 1) return true;
        // The stretch may be narrower than the sampling step.
        for (int k = 1; k < 64; ++k)
            if (classify(w.base_value(lo + (hi - lo) * k / 64), sign_tol) == 1) return true;
        return false;
    };

    // A zero-only stretch between two negative runs belongs to the gap.
    std::vector<Gap> merged;
    for (const Gap& g : gaps) {
        if (!merged.empty() && !has_positive_sample(merged.back().hi, g.lo))
            merged.back().hi = g.hi;
        else
            merged.push_back(g);
    }

    // Humps are the complementary stretches that carry positive mass; a
    // zero-only stretch at either domain end stays part of the outer gap.
    Decomposition d;
    d.length = L;
    double prev = 0.0;
    for (std::size_t g = 0; g <= merged.size(); ++g) {
        double lo = prev;
        double hi = (g < merged.size()) ? merged[g].lo : L;
        prev = (g < merged.size()) ? merged[g].hi : L;
        if (hi - lo <= 0.0) continue;
        if (!has_positive_sample(lo, hi)) continue;
        d.sigma.push_back(lo);
        d.tau.push_back(hi);
    }

    if (d.sigma.empty())
        throw std::runtime_error("weights: base function has no positivity hump on [0, " +
                                 std::to_string(L) + "]");
    return d;
}

namespace {

double x_at(double lo, double hi, int grid, int j) { return lo + (hi - lo) * j / grid; }

void add_violation(DecompositionCheck& c, double where, const std::string& what) {
    if (c.pass) {
        c.pass = false;
        c.first_violation_x = where;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", where);
    c.violations.push_back(what + " (at x = " + buf + ")");
}

}  // namespace

DecompositionCheck validate_decomposition(const WeightFunction& w, const Decomposition& d,
                                          double sign_tol, int grid) {
    DecompositionCheck check;
    const double L = w.length;
    const int n = d.humps();

    if (d.length != L) {
        add_violation(check, 0.0, "decomposition length disagrees with the weight domain");
        return check;
    }
    double prev = 0.0;
    for (int k = 0; k < n; ++k) {
        if (!(prev <= d.sigma[k] && d.sigma[k] < d.tau[k] && d.tau[k] <= L)) {
            add_violation(check, d.sigma[k], "hump endpoints out of order");
            return check;
        }
        prev = d.tau[k];
    }

    // Humps (closed intervals): a >= -sign_tol throughout and strictly
    // positive a+ mass.
    for (int k = 0; k < n; ++k) {
        double lo = d.sigma[k], hi = d.tau[k];
        double mass = 0.0, prev_ap = 0.0;
        double h = (hi - lo) / grid;
        for (int j = 0; j <= grid; ++j) {
            double xx = x_at(lo, hi, grid, j);
            double av = w.base_value(xx);
            if (av < -sign_tol)
                add_violation(check, xx,
                              "hump " + std::to_string(k + 1) + " requires a >= 0 but a = " +
                                  std::to_string(av));
            double ap = std::fmax(av, 0.0);
            if (j > 0) mass += 0.5 * (prev_ap + ap) * h;
            prev_ap = ap;
        }
        if (!(mass > sign_tol * (hi - lo)))
            add_violation(check, lo, "hump " + std::to_string(k + 1) + " carries no positive mass");
    }

    // Gaps: a <= sign_tol throughout; a- mass accumulates immediately inside
    // the gap at each hump endpoint (leading/trailing domain ends are free).
    for (int g = 0; g <= n; ++g) {
        double lo = (g == 0) ? 0.0 : d.tau[g - 1];
        double hi = (g == n) ? L : d.sigma[g];
        if (hi - lo <= 0.0) continue;
        bool lo_is_hump_end = g > 0;
        bool hi_is_hump_end = g < n;

        double h = (hi - lo) / grid;
        std::vector<double> am(grid + 1);
        for (int j = 0; j <= grid; ++j) {
            double xx = x_at(lo, hi, grid, j);
            double av = w.base_value(xx);
            // The gap condition lives on the open interval; its endpoints are
            // shared with the humps (or the domain ends) and checked there.
            if (j > 0 && j < grid && av > sign_tol)
                add_violation(check, xx,
                              "gap (" + std::to_string(lo) + ", " + std::to_string(hi) +
                                  ") requires a <= 0 but a = " + std::to_string(av));
            am[j] = std::fmax(-av, 0.0);
        }
        if (lo_is_hump_end) {
            double acc = 0.0;
            for (int j = 1; j < grid; ++j) {
                acc += 0.5 * (am[j - 1] + am[j]) * h;
                if (!(acc > sign_tol * (x_at(lo, hi, grid, j) - lo))) {
                    add_violation(check, x_at(lo, hi, grid, j),
                                  "a- mass missing just inside the gap after tau_" +
                                      std::to_string(g));
                    break;
                }
            }
        }
        if (hi_is_hump_end) {
            double acc = 0.0;
            for (int j = grid - 1; j > 0; --j) {
                acc += 0.5 * (am[j] + am[j + 1]) * h;
                if (!(acc > sign_tol * (hi - x_at(lo, hi, grid, j)))) {
                    add_violation(check, x_at(lo, hi, grid, j),
                                  "a- mass missing just inside the gap before sigma_" +
                                      std::to_string(g + 1));
                    break;
                }
            }
        }
    }

    return check;
}

}  // namespace bvp
