#include "bvp/eigen.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bvp/ode.hpp"

namespace bvp {

EigenProblem EigenProblem::make(std::function<double(double)> q, double x_lo, double x_hi,
                                int check_grid) {
    if (!(x_lo < x_hi)) throw std::runtime_error("eigen: empty interval");
    double mass = 0.0, prev = -1.0;
    for (int i = 0; i <= check_grid; ++i) {
        double x = x_lo + (x_hi - x_lo) * i / check_grid;
        double v = q(x);
        if (v < -1e-12)
            throw std::runtime_error("eigen: q(" + std::to_string(x) + ") = " + std::to_string(v) +
                                     " is negative");
        if (i > 0) mass += 0.5 * (prev + v) * (x_hi - x_lo) / check_grid;
        prev = v;
    }
    if (!(mass > 0.0))
        throw std::runtime_error("eigen: q has no positive mass on the interval");
    return EigenProblem{std::move(q), x_lo, x_hi};
}

double prufer_angle(const EigenProblem& p, double lambda) {
    std::array<double, 1> theta{0.0};
    OdeOptions opt;
    opt.rtol = 1e-12;
    opt.atol = 1e-12;
    auto rhs = [&](double x, const std::array<double, 1>& y, std::array<double, 1>& dy) {
        double s = std::sin(y[0]), c = std::cos(y[0]);
        dy[0] = c * c + lambda * p.q(x) * s * s;
    };
    integrate_dopri5(rhs, p.x_lo, p.x_hi, theta, opt, {},
                     [](double, const std::array<double, 1>&) {},
                     [](double, const std::array<double, 1>&) { return false; });
    return theta[0];
}

double first_eigenvalue(const EigenProblem& p, double rel_tol) {
    const double pi = std::numbers::pi;

    double lo = 0.0, hi = 1.0;
    while (prufer_angle(p, hi) < pi) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12)
            throw std::runtime_error(
                "eigen: no eigenvalue bracket below 1e12; q is effectively zero");
    }
    while (hi - lo > rel_tol * hi) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (prufer_angle(p, mid) < pi)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// max (toward zero) or min (toward infinity) of g(s)/s over a geometric band.
// Endpoints are hit exactly; a cumulative-product grid would drift a few ulp
// past s_b, enough to spoil the estimate when g(s)/s crosses a round value
// right at the band edge.
double slope_extremum(const Expr& g, double s_a, double s_b, bool take_max, int points = 64) {
    const double inf = std::numeric_limits<double>::infinity();
    double best = take_max ? -inf : inf;
    for (int i = 0; i < points; ++i) {
        double s = (i == 0)            ? s_a
                   : (i == points - 1) ? s_b
                                       : s_a * std::pow(s_b / s_a, double(i) / (points - 1));
        double v = g.eval(s) / s;
        best = take_max ? std::fmax(best, v) : std::fmin(best, v);
    }
    return best;
}

}  // namespace

HypothesisReport check_hypotheses(const WeightFunction& w, const Decomposition& d, const Expr& g,
                                  double s_lo, double s_hi) {
    if (!(s_lo > 0.0 && s_hi > s_lo))
        throw std::runtime_error("eigen: slope sample bounds must satisfy 0 < s_lo < s_hi");

    HypothesisReport rep;

    EigenProblem full = EigenProblem::make([&w](double x) { return w.positive_part(x); }, 0.0,
                                           w.length);
    rep.lambda0 = first_eigenvalue(full);

    double lambda1_max = 0.0;
    for (int i = 0; i < d.humps(); ++i) {
        EigenProblem hump = EigenProblem::make([&w](double x) { return w.positive_part(x); },
                                               d.sigma[i], d.tau[i]);
        double l1 = first_eigenvalue(hump);
        rep.lambda1.push_back(l1);
        lambda1_max = std::fmax(lambda1_max, l1);
        if (l1 < rep.lambda0 * (1.0 - 1e-8)) rep.ordering_ok = false;
    }

    rep.g_vanishes_at_zero = g.eval(0.0) == 0.0;
    {
        double ratio = std::pow(s_hi / s_lo, 1.0 / 255);
        double s = s_lo;
        for (int i = 0; i < 256 && rep.g_positive; ++i, s *= ratio)
            if (!(g.eval(s) > 0.0)) rep.g_positive = false;
    }

    // The sampling bands are one decade just above s_lo and three decades
    // just below s_hi, so both estimates hug their limit point.
    rep.g0_s_lo = s_lo;
    rep.g0_s_hi = 10.0 * s_lo;
    rep.ginf_s_lo = s_hi / 1e3;
    rep.ginf_s_hi = s_hi;
    rep.g0_estimate = slope_extremum(g, rep.g0_s_lo, rep.g0_s_hi, /*take_max=*/true);
    rep.ginf_estimate = slope_extremum(g, rep.ginf_s_lo, rep.ginf_s_hi, /*take_max=*/false);

    rep.g0_below_lambda0 = rep.g0_estimate < rep.lambda0;
    rep.ginf_above_lambda1 = rep.ginf_estimate > lambda1_max;
    rep.pass = rep.g_vanishes_at_zero && rep.g_positive && rep.g0_below_lambda0 &&
               rep.ginf_above_lambda1 && rep.ordering_ok;
    return rep;
}

}  // namespace bvp
