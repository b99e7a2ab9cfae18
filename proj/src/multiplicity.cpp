#include "bvp/multiplicity.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace bvp {

std::string signature_string(SignatureMask s) {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < 32; ++i) {
        if (!(s & (SignatureMask{1} << i))) continue;
        if (!first) out += ',';
        out += std::to_string(i + 1);
        first = false;
    }
    out += '}';
    return out;
}

std::vector<int> signature_indices(SignatureMask s) {
    std::vector<int> out;
    for (int i = 0; i < 32; ++i)
        if (s & (SignatureMask{1} << i)) out.push_back(i + 1);
    return out;
}

double choose_r(const Expr& g, double lambda0, double delta, int r_grid) {
    if (!(delta > 0.0 && delta < lambda0))
        throw std::runtime_error("multiplicity: need 0 < delta < lambda0");
    if (r_grid < 2) throw std::runtime_error("multiplicity: r_grid too small");

    const double bound = lambda0 - delta;

    auto admissible = [&](double r) {
        for (int k = 1; k <= 1024; ++k) {
            double s = r * k / 1024;
            if (!(g.eval(s) / s <= bound)) return false;
        }
        return true;
    };

    // Grid is geometric over [1e-10, 1e2]; scan from the top for the largest
    // admissible point.  The exponent is formed directly so that grid points
    // with integer exponents do not pick up an ulp of drift.
    for (int i = r_grid - 1; i >= 0; --i) {
        double r = std::pow(10.0, -10.0 + 12.0 * i / (r_grid - 1));
        if (admissible(r)) return r;
    }
    throw std::runtime_error(
        "multiplicity: no admissible smallness radius; g(s)/s reaches lambda0 - delta "
        "arbitrarily close to zero");
}

SignatureResult signature_of(const Trajectory& t, const Decomposition& d, double r) {
    SignatureResult res;
    for (int i = 0; i < d.humps(); ++i) {
        double peak = 0.0;
        for (std::size_t j = 0; j < t.x.size(); ++j)
            if (t.x[j] >= d.sigma[i] && t.x[j] <= d.tau[i]) peak = std::fmax(peak, t.u[j]);
        if (std::fabs(peak - r) <= 1e-12) res.ambiguous = true;
        if (peak > r) res.mask |= SignatureMask{1} << i;
    }
    return res;
}

int predicted_degree(SignatureMask s) { return std::popcount(s) % 2 == 0 ? 1 : -1; }

bool degree_bookkeeping_check(int n) {
    if (n < 1 || n > 20)
        throw std::runtime_error("multiplicity: degree bookkeeping supports 1 <= n <= 20");
    const SignatureMask full = (SignatureMask{1} << n) - 1;
    for (SignatureMask j = 1; j <= full; ++j) {
        // Subsets K of J, including the empty set, enumerated downward.
        long long sum = 0;
        SignatureMask k = j;
        for (;;) {
            sum += predicted_degree(k);
            if (k == 0) break;
            k = (k - 1) & j;
        }
        if (sum != 0) return false;
    }
    return true;
}

MultiplicityReport solve_all(const Problem& p, const SlopeRange& slopes, const RPolicy& rp,
                             const Tolerances& tol, double s_lo, double s_hi) {
    MultiplicityReport rep;
    rep.mu = p.w.mu;
    rep.humps = p.d.humps();
    rep.decomposition = p.d;
    if (rep.humps > 20)
        throw std::runtime_error("multiplicity: more than 20 humps is unsupported");

    rep.hypotheses = check_hypotheses(p.w, p.d, p.g, s_lo, s_hi);
    if (!rep.hypotheses.pass)
        rep.annotation =
            "eigenvalue-slope hypotheses not satisfied; the 2^n - 1 prediction does not apply";

    rep.r_used = rp.explicit_r ? *rp.explicit_r
                               : choose_r(p.g, rep.hypotheses.lambda0,
                                          rp.delta_fraction * rep.hypotheses.lambda0, rp.r_grid);

    RootReport roots = isolate_roots(p, slopes.d_min, slopes.d_max, slopes.grid, tol);
    rep.rejected = std::move(roots.rejected);

    double max_sup = 0.0;
    for (Solution& s : roots.accepted) {
        SignatureResult sig = signature_of(s.traj, p.d, rep.r_used);
        s.signature = signature_indices(sig.mask);
        s.signature_ambiguous = sig.ambiguous;
        max_sup = std::fmax(max_sup, s.sup_norm);
        rep.coverage[sig.mask] += 1;
    }
    rep.solutions = std::move(roots.accepted);
    rep.count = static_cast<int>(rep.solutions.size());
    rep.R_used = 2.0 * max_sup;

    // Every non-empty subset of humps appears in the coverage table.
    const SignatureMask full = (SignatureMask{1} << rep.humps) - 1;
    bool covered = true;
    for (SignatureMask m = 1; m <= full; ++m) {
        if (rep.coverage.find(m) == rep.coverage.end()) rep.coverage[m] = 0;
        if (rep.coverage[m] == 0) covered = false;
    }
    bool empty_sig = rep.coverage.count(0) && rep.coverage[0] > 0;
    if (empty_sig)
        rep.annotation += std::string(rep.annotation.empty() ? "" : "; ") +
                          "a solution has empty signature (sup-norm below r)";

    rep.prediction_met = covered && rep.count >= static_cast<int>(full);
    return rep;
}

SweepReport sweep_mu(const Problem& base, std::span<const double> mu_values,
                     const SlopeRange& slopes, const RPolicy& rp, const Tolerances& tol,
                     double s_lo, double s_hi) {
    SweepReport sweep;
    for (double mu : mu_values) {
        WeightFunction w = base.w;
        w.mu = mu;
        Problem p{w, base.d, base.g};
        SweepRow row;
        row.mu = mu;
        row.report = solve_all(p, slopes, rp, tol, s_lo, s_hi);
        sweep.rows.push_back(std::move(row));
    }
    for (const SweepRow& row : sweep.rows)
        if (row.report.prediction_met && (!sweep.mu_hat || row.mu < *sweep.mu_hat))
            sweep.mu_hat = row.mu;
    return sweep;
}

}  // namespace bvp
