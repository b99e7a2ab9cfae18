#include "bvp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <vector>

#include "CLI11.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bvp/config.hpp"
#include "bvp/multiplicity.hpp"
#include "bvp/radial.hpp"
#include "bvp/report.hpp"

namespace bvp {

namespace {

Expr parse_key(const std::string& key, const std::string& text, const char* var) {
    try {
        return Expr::parse(text, var);
    } catch (const ParseError& e) {
        throw ConfigError("config: key '" + key + "': " + e.what());
    }
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("config: " + what);
}

Tolerances tolerances_of(const Config& c) {
    Tolerances t;
    t.rtol = c.rtol;
    t.atol = c.atol;
    t.bc_tol = c.bc_tol;
    t.curv_tol = c.curv_tol;
    t.u_cap = c.u_cap;
    t.output_points = c.output_points;
    return t;
}

RPolicy rpolicy_of(const Config& c) {
    RPolicy rp;
    rp.explicit_r = c.r;
    rp.delta_fraction = c.r_delta_frac;
    rp.r_grid = c.r_grid;
    return rp;
}

SlopeRange slopes_of(const Config& c) {
    require(c.d_min >= 0.0 && c.d_min < c.d_max, "need 0 <= d_min < d_max");
    require(c.slope_grid >= 2, "slope_grid must be at least 2");
    return SlopeRange{c.d_min, c.d_max, c.slope_grid};
}

struct IntervalSetup {
    WeightFunction w;
    Decomposition d;
    Expr g;
};

IntervalSetup build_interval(const Config& c) {
    require(c.L.has_value(), "key 'L' is required");
    require(c.weight.has_value(), "key 'weight' is required");
    require(c.mu.has_value(), "key 'mu' is required");
    require(c.g.has_value(), "key 'g' is required");

    Expr a = parse_key("weight", *c.weight, "x");
    Expr g = parse_key("g", *c.g, "s");
    WeightFunction w = WeightFunction::from_expr(a, *c.mu, *c.L);

    Decomposition d;
    if (!c.sigma.empty() || !c.tau.empty()) {
        require(c.sigma.size() == c.tau.size(), "keys 'sigma' and 'tau' must have equal length");
        d.sigma = c.sigma;
        d.tau = c.tau;
        d.length = *c.L;
        DecompositionCheck chk = validate_decomposition(w, d, c.sign_tol, c.grid);
        if (!chk.pass)
            throw ConfigError("config: supplied sigma/tau rejected: " + chk.violations.front());
    } else {
        d = decompose(w, c.sign_tol, c.grid);
    }
    return {std::move(w), std::move(d), std::move(g)};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

int cmd_check(const Config& c, std::ostream& out) {
    IntervalSetup s = build_interval(c);
    HypothesisReport rep = check_hypotheses(s.w, s.d, s.g, c.s_lo, c.s_hi);
    out << hypothesis_json(rep).dump(2) << "\n";
    return 0;
}

int cmd_eig(const Config& c, std::ostream& out) {
    IntervalSetup s = build_interval(c);
    EigenProblem full =
        EigenProblem::make([&](double x) { return s.w.positive_part(x); }, 0.0, s.w.length);
    double lambda0 = first_eigenvalue(full);
    std::vector<double> lambda1;
    for (int i = 0; i < s.d.humps(); ++i) {
        EigenProblem hump = EigenProblem::make([&](double x) { return s.w.positive_part(x); },
                                               s.d.sigma[i], s.d.tau[i]);
        lambda1.push_back(first_eigenvalue(hump));
    }
    out << eigen_table_csv(s.w, s.d, lambda0, lambda1);
    return 0;
}

int cmd_solve(const Config& c, std::ostream& out) {
    IntervalSetup s = build_interval(c);
    Problem p = Problem::make(s.w, s.d, s.g);
    MultiplicityReport rep = solve_all(p, slopes_of(c), rpolicy_of(c), tolerances_of(c),
                                       c.s_lo, c.s_hi);

    std::filesystem::create_directories(c.out_dir);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
        std::string name = "solution_" + std::to_string(i + 1) + ".csv";
        write_file(std::filesystem::path(c.out_dir) / name,
                   trajectory_csv(rep.solutions[i].traj));
        names.push_back(name);
    }
    out << multiplicity_json(rep, names).dump(2) << "\n";
    return 0;
}

int cmd_sweep(const Config& base, std::ostream& out, std::ostream& err) {
    std::vector<double> mus = base.mu_values;
    if (mus.empty()) {
        require(base.mu.has_value(), "key 'mu_values' (or 'mu') is required for sweep");
        mus.push_back(*base.mu);
    }
    Config c = base;
    if (!c.mu) c.mu = mus.front();
    IntervalSetup s = build_interval(c);
    Problem p = Problem::make(s.w, s.d, s.g);
    SweepReport sweep =
        sweep_mu(p, mus, slopes_of(c), rpolicy_of(c), tolerances_of(c), c.s_lo, c.s_hi);
    std::string csv = sweep_csv(sweep);
    out << csv;
    std::filesystem::create_directories(c.out_dir);
    write_file(std::filesystem::path(c.out_dir) / "sweep.csv", csv);
    if (sweep.mu_hat)
        err << "mu_hat = " << fmt17(*sweep.mu_hat) << " (smallest grid mu with full coverage)\n";
    else
        err << "mu_hat = none (no grid mu achieved full coverage)\n";
    return 0;
}

int cmd_radial(const Config& c, std::ostream& out) {
    require(c.N.has_value(), "key 'N' is required for radial");
    require(c.R1.has_value() && c.R2.has_value(), "keys 'R1' and 'R2' are required for radial");
    require(c.A.has_value(), "key 'A' is required for radial");
    require(c.mu.has_value(), "key 'mu' is required");
    require(c.g.has_value(), "key 'g' is required");

    AnnulusProblem ap{*c.N, *c.R1, *c.R2, parse_key("A", *c.A, "r"), *c.mu,
                      parse_key("g", *c.g, "s")};
    Problem p = transform(ap, c.sign_tol, c.grid);
    Tolerances tol = tolerances_of(c);
    MultiplicityReport rep = solve_all(p, slopes_of(c), rpolicy_of(c), tol, c.s_lo, c.s_hi);

    std::filesystem::create_directories(c.out_dir);
    std::vector<std::string> names;
    nlohmann::ordered_json radial = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
        std::string uname = "solution_" + std::to_string(i + 1) + ".csv";
        std::string vname = "radial_solution_" + std::to_string(i + 1) + ".csv";
        write_file(std::filesystem::path(c.out_dir) / uname,
                   trajectory_csv(rep.solutions[i].traj));
        names.push_back(uname);

        RadialSolution rs = back_map(ap, p, rep.solutions[i], tol, c.output_points);
        write_file(std::filesystem::path(c.out_dir) / vname, radial_csv(rs));
        nlohmann::ordered_json jr;
        jr["slope"] = rs.slope;
        jr["v_sup_norm"] = rs.sup_norm;
        jr["max_relative_residual"] = rs.max_relative_residual;
        jr["radial_csv"] = vname;
        radial.push_back(std::move(jr));
    }

    nlohmann::ordered_json j;
    j["annulus"] = {{"N", *c.N}, {"R1", *c.R1}, {"R2", *c.R2}};
    j["transformed_length"] = p.w.length;
    j["interval_report"] = multiplicity_json(rep, names);
    j["radial_solutions"] = std::move(radial);
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_repro_fig1(const Config& base, std::ostream& out) {
    Config c = base;   // tolerances/threads may be overridden; the problem is pinned
    c.L = 1.0;
    c.weight = "sin(3*pi*x)";
    c.mu = 0.5;
    c.g = "max(0,100*s*atan(abs(s)))";
    c.sigma.clear();
    c.tau.clear();
    c.d_min = 0.0;
    c.d_max = 5.0;
    c.slope_grid = 500;
    c.r.reset();

    IntervalSetup s = build_interval(c);
    Problem p = Problem::make(s.w, s.d, s.g);
    MultiplicityReport rep = solve_all(p, slopes_of(c), rpolicy_of(c), tolerances_of(c),
                                       c.s_lo, c.s_hi);

    out << "count=" << rep.count << "\n";
    for (const Solution& sol : rep.solutions)
        out << "slope=" << fmt17(sol.slope) << " sup_norm=" << fmt17(sol.sup_norm)
            << " signature=" << signature_string([&] {
               SignatureMask m = 0;
               for (int idx : sol.signature) m |= SignatureMask{1} << (idx - 1);
               return m;
           }()) << "\n";

    bool ok = rep.count == 3;
    for (const Solution& sol : rep.solutions)
        if (sol.boundary_residual > 1e-8) ok = false;
    out << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Positive solutions of u'' + a_mu(x) g(u) = 0 by shooting:\n"
                 "eigenvalue checks, root isolation, signature classification,\n"
                 "and the 2^n - 1 multiplicity count for indefinite weights."};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    int threads = 0;

    auto add_common = [&](CLI::App* sc) {
        sc->add_option("--config", config_path, "configuration file (key = value lines)");
        sc->add_option("--set", sets, "override KEY=VALUE, repeatable, applied after --config");
        sc->add_option("--out", out_dir, "output directory (overrides key 'out_dir')");
        sc->add_option("--threads", threads, "OpenMP thread count (overrides key 'threads')");
        sc->footer(Config::describe_keys());
        return sc;
    };

    CLI::App* c_check = add_common(app.add_subcommand(
        "check", "eigenvalue-slope hypothesis report for the interval problem (JSON)"));
    CLI::App* c_eig = add_common(app.add_subcommand(
        "eig", "first Dirichlet eigenvalues of a+ on the full interval and each hump (CSV)"));
    CLI::App* c_solve = add_common(app.add_subcommand(
        "solve", "isolate and classify positive solutions for one mu (JSON + trajectory CSVs)"));
    CLI::App* c_sweep = add_common(app.add_subcommand(
        "sweep", "solve across a list of mu values and report coverage (CSV)"));
    CLI::App* c_radial = add_common(app.add_subcommand(
        "radial", "annulus problem: transform, solve, and map solutions back (JSON + CSVs)"));
    CLI::App* c_repro = add_common(app.add_subcommand(
        "repro-fig1", "built-in three-solution configuration; prints count and PASS/FAIL"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        Config c;
        if (!config_path.empty()) c = Config::from_file(config_path);
        for (const std::string& kv : sets) {
            std::size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config: --set expects KEY=VALUE, got '" + kv + "'");
            c.apply(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!out_dir.empty()) c.out_dir = out_dir;
        if (threads > 0) c.threads = threads;
#ifdef _OPENMP
        if (c.threads > 0) omp_set_num_threads(c.threads);
#endif

        if (c_check->parsed()) return cmd_check(c, out);
        if (c_eig->parsed()) return cmd_eig(c, out);
        if (c_solve->parsed()) return cmd_solve(c, out);
        if (c_sweep->parsed()) return cmd_sweep(c, out, err);
        if (c_radial->parsed()) return cmd_radial(c, out);
        if (c_repro->parsed()) return cmd_repro_fig1(c, out);
        err << "error: no subcommand selected\n";
        return 2;
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace bvp
