#pragma once

#include <string>
#include <vector>

#include "bvp/expr.hpp"
#include "bvp/shooting.hpp"

namespace bvp {

// Radial Dirichlet problem on an annulus R1 <= |x| <= R2 in dimension dim:
// v'' + ((dim-1)/r) v' + A_mu(r) g(v) = 0, v(R1) = v(R2) = 0, where A_mu is
// built from the indefinite base weight A the same way as on an interval.
struct AnnulusProblem {
    int dim = 2;
    double R1 = 1.0;
    double R2 = 2.0;
    Expr A;    // base weight in the variable r
    double mu = 1.0;
    Expr g;
};

// t = h(r) = integral of s^(1-dim) from R1 to r; strictly increasing, h(R1)=0.
double h_map(int dim, double R1, double r);
// Inverse of h_map in closed form.
double h_inverse(int dim, double R1, double t);

// The interval problem equivalent to the annulus problem: on [0, h(R2)] with
// transformed weight a_mu(t) = r(t)^(2(dim-1)) * A_mu(r(t)).  The weight is
// a composed evaluator (not re-parsed text) and the hump decomposition is the
// h-image of the decomposition of A on [R1, R2].
Problem transform(const AnnulusProblem& ap, double sign_tol = 1e-12, int grid = 4096);

struct RadialSolution {
    std::vector<double> r, v, dv;    // v(r) = u(h(r)), v'(r) = u'(h(r)) r^(1-dim)
    double slope = 0.0;              // the interval-problem slope it came from
    double max_relative_residual = 0.0;
    double sup_norm = 0.0;
};

// Maps an interval Solution back to the annulus on a uniform r-grid of
// sample_points and evaluates the radial ODE residual by finite differences.
// The u, u' values at the r-grid are integrator states (the interval problem
// is re-integrated with stops at h(r_j)), not interpolants.
RadialSolution back_map(const AnnulusProblem& ap, const Problem& transformed,
                        const Solution& sol, const Tolerances& tol, int sample_points = 2001);

}  // namespace bvp
