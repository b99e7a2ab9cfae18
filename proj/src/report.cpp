#include "bvp/report.hpp"

#include <cstdio>

namespace bvp {

using nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json hypothesis_json(const HypothesisReport& rep) {
    ordered_json j;
    j["lambda0"] = rep.lambda0;
    j["lambda1"] = rep.lambda1;
    j["g0_estimate"] = rep.g0_estimate;
    j["g0_band"] = {rep.g0_s_lo, rep.g0_s_hi};
    j["ginf_estimate"] = rep.ginf_estimate;
    j["ginf_band"] = {rep.ginf_s_lo, rep.ginf_s_hi};
    j["g_vanishes_at_zero"] = rep.g_vanishes_at_zero;
    j["g_positive"] = rep.g_positive;
    j["g0_below_lambda0"] = rep.g0_below_lambda0;
    j["ginf_above_max_lambda1"] = rep.ginf_above_lambda1;
    j["lambda_ordering_ok"] = rep.ordering_ok;
    j["pass"] = rep.pass;
    j["note"] = "slope limits are finite-sample estimates, not proofs";
    return j;
}

ordered_json multiplicity_json(const MultiplicityReport& rep,
                               const std::vector<std::string>& csv_names) {
    ordered_json j;
    j["mu"] = rep.mu;
    j["humps"] = rep.humps;
    j["sigma"] = rep.decomposition.sigma;
    j["tau"] = rep.decomposition.tau;
    j["hypotheses"] = hypothesis_json(rep.hypotheses);
    j["r_used"] = rep.r_used;
    j["R_used"] = rep.R_used;
    j["R_policy"] = "2x the largest observed solution sup-norm";
    j["count"] = rep.count;
    j["predicted_min_count"] = (1 << rep.humps) - 1;
    j["prediction_met"] = rep.prediction_met;

    ordered_json cov = ordered_json::object();
    for (const auto& [mask, n] : rep.coverage)
        if (mask != 0) cov[signature_string(mask)] = n;
    j["coverage"] = cov;

    ordered_json sols = ordered_json::array();
    for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
        const Solution& s = rep.solutions[i];
        ordered_json js;
        js["slope"] = s.slope;
        js["sup_norm"] = s.sup_norm;
        js["boundary_residual"] = s.boundary_residual;
        js["max_relative_residual"] = s.max_rel_residual;
        js["positivity_margin"] = s.positivity_margin;
        js["terminal_slope"] = s.terminal_slope;
        js["signature"] = s.signature;
        js["signature_ambiguous"] = s.signature_ambiguous;
        js["steps_accepted"] = s.traj.stats.accepted;
        js["steps_rejected"] = s.traj.stats.rejected;
        js["rhs_evals"] = s.traj.stats.evals;
        if (i < csv_names.size()) js["trajectory_csv"] = csv_names[i];
        sols.push_back(std::move(js));
    }
    j["solutions"] = std::move(sols);

    ordered_json rej = ordered_json::array();
    for (const auto& r : rep.rejected) {
        ordered_json jr;
        jr["slope"] = r.slope;
        jr["reason"] = r.reason;
        rej.push_back(std::move(jr));
    }
    j["rejected"] = std::move(rej);
    j["annotation"] = rep.annotation;
    return j;
}

std::string trajectory_csv(const Trajectory& t) {
    std::string out = "x,u,u_prime\n";
    for (std::size_t i = 0; i < t.x.size(); ++i)
        out += fmt17(t.x[i]) + "," + fmt17(t.u[i]) + "," + fmt17(t.du[i]) + "\n";
    return out;
}

std::string radial_csv(const RadialSolution& rs) {
    std::string out = "r,v,v_prime\n";
    for (std::size_t i = 0; i < rs.r.size(); ++i)
        out += fmt17(rs.r[i]) + "," + fmt17(rs.v[i]) + "," + fmt17(rs.dv[i]) + "\n";
    return out;
}

std::string eigen_table_csv(const WeightFunction& w, const Decomposition& d, double lambda0,
                            const std::vector<double>& lambda1) {
    std::string out = "interval,x_lo,x_hi,lambda\n";
    out += "full,0," + fmt17(w.length) + "," + fmt17(lambda0) + "\n";
    for (std::size_t i = 0; i < lambda1.size(); ++i)
        out += "hump_" + std::to_string(i + 1) + "," + fmt17(d.sigma[i]) + "," +
               fmt17(d.tau[i]) + "," + fmt17(lambda1[i]) + "\n";
    return out;
}

std::string sweep_csv(const SweepReport& sweep) {
    std::string out = "mu,count,signatures,slopes\n";
    for (const SweepRow& row : sweep.rows) {
        std::string sigs, slopes;
        for (std::size_t i = 0; i < row.report.solutions.size(); ++i) {
            const Solution& s = row.report.solutions[i];
            if (i) {
                sigs += ';';
                slopes += ';';
            }
            SignatureMask m = 0;
            for (int idx : s.signature) m |= SignatureMask{1} << (idx - 1);
            sigs += signature_string(m);
            slopes += fmt17(s.slope);
        }
        out += fmt17(row.mu) + "," + std::to_string(row.report.count) + ",\"" + sigs + "\",\"" +
               slopes + "\"\n";
    }
    return out;
}

}  // namespace bvp
