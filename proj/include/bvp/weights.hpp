#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bvp/expr.hpp"

namespace bvp {

// Indefinite weight a_mu(x) = a+(x) - mu*a-(x) on [0, length], where a is the
// unscaled base function and a+/a- are its positive/negative parts.
struct WeightFunction {
    std::function<double(double)> base;   // the unscaled a(x)
    double mu = 1.0;
    double length = 1.0;
    std::string source;   // expression text when the base came from one

    static WeightFunction from_expr(const Expr& a, double mu, double length);

    double base_value(double x) const;       // a(x)
    double positive_part(double x) const;    // a+(x)
    double negative_part(double x) const;    // a-(x)
    double eval(double x) const;             // a_mu(x)
};

// Positivity humps [sigma_i, tau_i], i = 0..n-1, separated by gaps where the
// base weight is <= 0.  Zero stretches adjoining a hump are merged into it, so
// a- is not identically zero immediately inside any gap next to a hump end.
struct Decomposition {
    std::vector<double> sigma, tau;
    double length = 0.0;

    int humps() const { return static_cast<int>(sigma.size()); }
};

struct DecompositionCheck {
    bool pass = true;
    std::vector<std::string> violations;
    double first_violation_x = 0.0;   // meaningful only when !pass
};

// Locates sign changes of the base weight by dense sampling plus bisection
// (boundary points resolved to width <= 1e-13) and assembles the humps.
// Throws std::runtime_error when no positivity hump exists.
Decomposition decompose(const WeightFunction& w, double sign_tol = 1e-12, int grid = 4096);

// Checks a (possibly user-supplied) decomposition against the base weight:
// a >= -sign_tol on humps with strictly positive a+ mass, a <= sign_tol on
// gaps, and a- mass accumulating immediately inside each gap at a hump end.
DecompositionCheck validate_decomposition(const WeightFunction& w, const Decomposition& d,
                                          double sign_tol = 1e-12, int grid = 4096);

}  // namespace bvp
