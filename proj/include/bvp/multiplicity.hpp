#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bvp/eigen.hpp"
#include "bvp/shooting.hpp"

namespace bvp {

// A subset of hump indices as a bitmask: bit i-1 set means hump i belongs.
using SignatureMask = std::uint32_t;

std::string signature_string(SignatureMask s);           // "{1,3}", "{}" for empty
std::vector<int> signature_indices(SignatureMask s);     // sorted 1-based

// Largest admissible smallness radius: the biggest r on a geometric grid of
// r_grid points in [1e-10, 1e2] such that g(s)/s <= lambda0 - delta for all s
// on a 1024-point grid in (0, r].  Throws when no grid point is admissible
// (g is not sublinear enough near zero).
double choose_r(const Expr& g, double lambda0, double delta, int r_grid = 241);

struct SignatureResult {
    SignatureMask mask = 0;
    bool ambiguous = false;   // some hump max is within 1e-12 of r
};

// Humps on which the trajectory max exceeds r (sampled on the dense grid).
SignatureResult signature_of(const Trajectory& t, const Decomposition& d, double r);

// Topological degree predicted for the localization set of a signature.
int predicted_degree(SignatureMask s);

// Exact combinatorial identity behind the 2^n - 1 count: for every non-empty
// J in {1..n}, the degrees of the signature classes inside J cancel.
// 1 <= n <= 20; exact integer arithmetic throughout.
bool degree_bookkeeping_check(int n);

struct RPolicy {
    std::optional<double> explicit_r;   // overrides choose_r when set
    double delta_fraction = 0.1;        // delta = fraction * lambda0
    int r_grid = 241;
};

struct MultiplicityReport {
    double mu = 0.0;
    int humps = 0;
    Decomposition decomposition;
    HypothesisReport hypotheses;
    double r_used = 0.0;
    double R_used = 0.0;   // 2x the largest observed sup-norm (0 when no solutions)
    std::vector<Solution> solutions;
    std::vector<RootReport::Rejected> rejected;
    std::map<SignatureMask, int> coverage;   // every non-empty subset, with counts
    int count = 0;
    bool prediction_met = false;   // count >= 2^n - 1 and every subset covered
    std::string annotation;        // non-empty when hypotheses fail etc.
};

struct SlopeRange {
    double d_min = 0.0;
    double d_max = 5.0;
    int grid = 500;
};

// Shooting + classification for one mu: isolates roots, attaches signatures,
// tallies subset coverage against the 2^n - 1 prediction, and attaches the
// hypothesis report (with an annotation when its verdict fails).
MultiplicityReport solve_all(const Problem& p, const SlopeRange& slopes, const RPolicy& rp,
                             const Tolerances& tol, double s_lo = 1e-8, double s_hi = 1e8);

struct SweepRow {
    double mu = 0.0;
    MultiplicityReport report;
};

struct SweepReport {
    std::vector<SweepRow> rows;
    std::optional<double> mu_hat;   // smallest grid mu with full coverage
};

// solve_all across a list of mu values (same base weight and decomposition;
// the sign pattern of a does not depend on mu).
SweepReport sweep_mu(const Problem& base, std::span<const double> mu_values,
                     const SlopeRange& slopes, const RPolicy& rp, const Tolerances& tol,
                     double s_lo = 1e-8, double s_hi = 1e8);

}  // namespace bvp
