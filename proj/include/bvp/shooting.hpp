#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bvp/expr.hpp"
#include "bvp/ode.hpp"
#include "bvp/weights.hpp"

namespace bvp {

// u'' + a_mu(x) * g~(u) = 0 on [0, L] with u(0) = u(L) = 0, where g~ extends
// the nonlinearity by zero for negative arguments.
struct Problem {
    WeightFunction w;
    Decomposition d;
    Expr g;

    // Requires g(0) == 0 (so the zero extension is continuous and the zero
    // slope gives the identically-zero trajectory).
    static Problem make(WeightFunction w, Decomposition d, Expr g);

    double g_tilde(double s) const { return s >= 0.0 ? g.eval(s) : 0.0; }
};

struct Tolerances {
    double rtol = 1e-10;
    double atol = 1e-12;
    double bc_tol = 1e-8;       // |u(L)| accepted as a boundary hit
    double curv_tol = 1e-2;     // slack for divided second differences
    double u_cap = 1e6;         // escape threshold on |u| (10x on |u'|)
    int output_points = 2001;   // dense trajectory grid including both ends
};

struct Trajectory {
    std::vector<double> x, u, du;
    bool escaped = false;
    double escape_x = 0.0;
    std::string escape_reason;
    double terminal_u = 0.0;    // u(L), valid when !escaped
    double terminal_du = 0.0;   // u'(L)
    OdeStats stats;
};

struct Solution {
    double slope = 0.0;              // u'(0)
    Trajectory traj;
    double boundary_residual = 0.0;  // |u(L)|
    double positivity_margin = 0.0;  // min u over interior grid points
    double sup_norm = 0.0;
    double terminal_slope = 0.0;     // u'(L)
    double max_rel_residual = 0.0;   // worst interior ODE defect, relative
    std::vector<int> signature;      // humps where max u > r (1-based), set later
    bool signature_ambiguous = false;
};

struct RootReport {
    struct Rejected {
        double slope;
        std::string reason;
    };
    std::vector<Solution> accepted;
    std::vector<Rejected> rejected;
};

// Full trajectory from (u, u')(0) = (0, slope) on the dense output grid.
// Integration steps are clipped to the grid, so every recorded sample is an
// integrator state.  Halts early (escaped = true) when |u| > u_cap or
// |u'| > 10*u_cap.
Trajectory integrate(const Problem& p, double slope, const Tolerances& tol);

// Terminal value u(L; slope), or sign(u at escape) * u_cap when the
// trajectory escapes.  No dense grid, so considerably cheaper.
double shoot_value(const Problem& p, double slope, const Tolerances& tol);

// shoot_value on every slope in the list.  The OpenMP variant distributes
// slopes over threads and stores by index, so its output is bit-identical to
// the serial reference regardless of thread count.  A slope whose integration
// fails outright yields NaN.
std::vector<double> sweep_shoot_values(const Problem& p, std::span<const double> slopes,
                                       const Tolerances& tol);
std::vector<double> sweep_shoot_values_serial(const Problem& p, std::span<const double> slopes,
                                              const Tolerances& tol);

// Why a candidate trajectory is not a positive solution, or nullopt.
std::optional<std::string> solution_defect(const Problem& p, const Trajectory& t,
                                           const Tolerances& tol);

// Scans shoot_value over a uniform slope grid on (d_min, d_max], brackets
// sign changes, bisects each to slope width 1e-13 (or |u(L)| <= bc_tol),
// validates, and de-duplicates roots closer than 1e-9.
RootReport isolate_roots(const Problem& p, double d_min, double d_max, int grid,
                         const Tolerances& tol);

// Max of |u'' + a_mu(x) g~(u)| / (1 + |a_mu(x) g~(u)|) over interior grid
// points, with u'' from 5-point finite differences on the dense grid.
double max_relative_residual(const Problem& p, const Trajectory& t);

}  // namespace bvp
