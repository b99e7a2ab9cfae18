#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bvp/expr.hpp"
#include "bvp/weights.hpp"

namespace bvp {

// Weighted Dirichlet problem phi'' + lambda * q(x) * phi = 0 on [x_lo, x_hi]
// with q >= 0 and positive mass.
struct EigenProblem {
    std::function<double(double)> q;
    double x_lo = 0.0;
    double x_hi = 1.0;

    // Samples q for non-negativity and positive mass; throws on violation.
    static EigenProblem make(std::function<double(double)> q, double x_lo, double x_hi,
                             int check_grid = 2048);
};

// Integrates the angle equation theta' = cos^2(theta) + lambda*q*sin^2(theta)
// from theta(x_lo) = 0 and returns theta(x_hi).  Non-decreasing in lambda.
double prufer_angle(const EigenProblem& p, double lambda);

// First Dirichlet eigenvalue: the lambda where the angle reaches pi at x_hi.
// Brackets by doubling from lambda = 1, then bisects to relative width
// rel_tol.  Throws when no bracket is found below 1e12 (q effectively zero).
double first_eigenvalue(const EigenProblem& p, double rel_tol = 1e-10);

struct HypothesisReport {
    double lambda0 = 0.0;                 // first eigenvalue of a+ on [0, L]
    std::vector<double> lambda1;          // per-hump eigenvalues of a+
    double g0_estimate = 0.0;             // near-zero slope bound of g(s)/s
    double ginf_estimate = 0.0;           // near-infinity slope bound of g(s)/s
    double g0_s_lo = 0.0, g0_s_hi = 0.0;  // sample band used for g0
    double ginf_s_lo = 0.0, ginf_s_hi = 0.0;
    bool g_vanishes_at_zero = true;       // g(0) == 0
    bool g_positive = true;               // g > 0 sampled on (0, s_hi]
    bool g0_below_lambda0 = false;
    bool ginf_above_lambda1 = false;
    bool ordering_ok = true;              // lambda0 <= min_i lambda1[i]
    bool pass = false;

    // Estimates are finite samples of limits; a pass is evidence, not proof.
    static constexpr bool numeric_limit_caveat = true;
};

// Evaluates the eigenvalue-slope conditions for superlinear existence:
// limsup_{s->0+} g(s)/s < lambda0 and liminf_{s->inf} g(s)/s > max_i lambda1_i.
// The slope limits are sampled on geometric bands anchored at s_lo and s_hi.
HypothesisReport check_hypotheses(const WeightFunction& w, const Decomposition& d, const Expr& g,
                                  double s_lo = 1e-8, double s_hi = 1e8);

}  // namespace bvp
