#include "bvp/radial.hpp"

#include <cmath>
#include <stdexcept>

namespace bvp {

namespace {

void check_annulus(int dim, double R1) {
    if (dim < 2) throw std::runtime_error("radial: dimension must be >= 2");
    if (!(R1 > 0.0)) throw std::runtime_error("radial: inner radius must be positive");
}

}  // namespace

double h_map(int dim, double R1, double r) {
    check_annulus(dim, R1);
    if (r < R1 * (1.0 - 1e-12))
        throw std::runtime_error("radial: r = " + std::to_string(r) + " below inner radius");
    if (dim == 2) return std::log(r / R1);
    double p = static_cast<double>(dim - 2);
    return (std::pow(R1, -p) - std::pow(r, -p)) / p;
}

double h_inverse(int dim, double R1, double t) {
    check_annulus(dim, R1);
    if (t < -1e-12) throw std::runtime_error("radial: t below 0");
    if (dim == 2) return R1 * std::exp(t);
    double p = static_cast<double>(dim - 2);
    double base = std::pow(R1, -p) - p * t;
    if (!(base > 0.0))
        throw std::runtime_error("radial: t = " + std::to_string(t) +
                                 " beyond the reach of the annulus map");
    return std::pow(base, -1.0 / p);
}

Problem transform(const AnnulusProblem& ap, double sign_tol, int grid) {
    check_annulus(ap.dim, ap.R1);
    if (!(ap.R2 > ap.R1)) throw std::runtime_error("radial: need R1 < R2");

    const int dim = ap.dim;
    const double R1 = ap.R1, R2 = ap.R2;
    const double L = h_map(dim, R1, R2);

    // Decompose the base weight in r (shifted to [0, R2-R1]), then carry the
    // hump endpoints through h; h is strictly increasing, so order and sign
    // structure survive exactly.
    WeightFunction in_r;
    Expr A = ap.A;
    in_r.base = [A, R1](double s) { return A.eval(R1 + s); };
    in_r.mu = ap.mu;
    in_r.length = R2 - R1;
    in_r.source = A.source();
    Decomposition dr = decompose(in_r, sign_tol, grid);

    Decomposition dt;
    dt.length = L;
    for (int i = 0; i < dr.humps(); ++i) {
        dt.sigma.push_back(h_map(dim, R1, R1 + dr.sigma[i]));
        dt.tau.push_back(h_map(dim, R1, R1 + dr.tau[i]));
    }
    if (!dt.sigma.empty() && dr.tau.back() == R2 - R1) dt.tau.back() = L;

    WeightFunction wt;
    wt.base = [A, dim, R1](double t) {
        double r = h_inverse(dim, R1, t);
        return std::pow(r, 2.0 * (dim - 1)) * A.eval(r);
    };
    wt.mu = ap.mu;
    wt.length = L;
    wt.source = "r(t)^" + std::to_string(2 * (dim - 1)) + " * (" + A.source() + ")(r(t))";

    return Problem::make(std::move(wt), std::move(dt), ap.g);
}

RadialSolution back_map(const AnnulusProblem& ap, const Problem& transformed,
                        const Solution& sol, const Tolerances& tol, int sample_points) {
    const int dim = ap.dim;
    const double R1 = ap.R1, R2 = ap.R2;
    const double L = transformed.w.length;
    if (sample_points < 5) throw std::runtime_error("radial: sample grid too coarse");

    RadialSolution rs;
    rs.slope = sol.slope;
    rs.r.resize(sample_points);
    rs.v.resize(sample_points);
    rs.dv.resize(sample_points);

    std::vector<double> t_stops(sample_points - 1);
    for (int j = 0; j < sample_points; ++j)
        rs.r[j] = R1 + (R2 - R1) * j / (sample_points - 1);
    for (int j = 1; j < sample_points; ++j)
        t_stops[j - 1] = std::fmin(h_map(dim, R1, rs.r[j]), L);
    t_stops.back() = L;

    rs.v[0] = 0.0;
    rs.dv[0] = sol.slope * std::pow(R1, 1.0 - dim);

    std::array<double, 2> y{0.0, sol.slope};
    OdeOptions opt{tol.rtol, tol.atol};
    const Problem& p = transformed;
    auto rhs = [&p](double t, const std::array<double, 2>& s, std::array<double, 2>& ds) {
        ds[0] = s[1];
        ds[1] = -p.w.eval(t) * p.g_tilde(s[0]);
    };
    int idx = 1;
    auto record = [&](double t, const std::array<double, 2>& s) {
        double r = h_inverse(dim, R1, t);
        rs.v[idx] = s[0];
        rs.dv[idx] = s[1] * std::pow(r, 1.0 - dim);
        ++idx;
    };
    integrate_dopri5(rhs, 0.0, L, y, opt, t_stops, record,
                     [](double, const std::array<double, 2>&) { return false; });
    if (idx != sample_points)
        throw std::runtime_error("radial: back-map integration missed sample points");

    for (double v : rs.v) rs.sup_norm = std::fmax(rs.sup_norm, std::fabs(v));

    // Residual of v'' + ((dim-1)/r) v' + A_mu(r) g~(v) on the uniform r-grid;
    // v'' from 5-point differences, v' from the integrator state.
    const double h = (R2 - R1) / (sample_points - 1);
    for (int j = 2; j + 2 < sample_points; ++j) {
        double d2 = (-rs.v[j - 2] + 16.0 * rs.v[j - 1] - 30.0 * rs.v[j] + 16.0 * rs.v[j + 1] -
                     rs.v[j + 2]) /
                    (12.0 * h * h);
        double r = rs.r[j];
        double a = ap.A.eval(r);
        double amu = std::fmax(a, 0.0) - ap.mu * std::fmax(-a, 0.0);
        double force = amu * (rs.v[j] >= 0.0 ? ap.g.eval(rs.v[j]) : 0.0);
        double res = std::fabs(d2 + (dim - 1) / r * rs.dv[j] + force) / (1.0 + std::fabs(force));
        rs.max_relative_residual = std::fmax(rs.max_relative_residual, res);
    }
    return rs;
}

}  // namespace bvp
