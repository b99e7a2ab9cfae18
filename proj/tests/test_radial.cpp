#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "bvp/expr.hpp"
#include "bvp/radial.hpp"
#include "bvp/shooting.hpp"
#include "bvp/weights.hpp"
#include "doctest.h"
#include "oracles.hpp"

using bvp::AnnulusProblem;
using bvp::back_map;
using bvp::Expr;
using bvp::h_inverse;
using bvp::h_map;
using bvp::isolate_roots;
using bvp::Problem;
using bvp::RadialSolution;
using bvp::RootReport;
using bvp::Solution;
using bvp::Tolerances;
using bvp::transform;
using bvp::validate_decomposition;

namespace {

const double pi = std::numbers::pi;
const double e1 = std::numbers::e;

AnnulusProblem annulus(int dim, double R1, double R2, const std::string& A, double mu,
                       const std::string& g) {
    return AnnulusProblem{dim, R1, R2, Expr::parse(A, "r"), mu, Expr::parse(g, "s")};
}

}  // namespace

TEST_CASE("annulus map closed forms") {
    CHECK(h_map(2, 1.0, 1.0) == 0.0);
    CHECK(std::fabs(h_map(2, 1.0, e1) - 1.0) <= 1e-15);
    CHECK(h_map(3, 1.0, 1.0) == 0.0);
    CHECK(h_map(3, 1.0, 2.0) == 0.5);
    CHECK(h_map(4, 0.5, 0.5) == 0.0);

    CHECK(h_inverse(2, 1.0, 0.0) == 1.0);
    CHECK(std::fabs(h_inverse(2, 1.0, 1.0) - e1) <= 1e-15 * e1);
    CHECK(h_inverse(3, 1.0, 0.5) == 2.0);
}

TEST_CASE("annulus map round trips") {
    const std::array<std::array<double, 3>, 3> cases = {{{2, 1.0, e1}, {3, 1.0, 2.0}, {5, 0.5, 3.0}}};
    for (const auto& c : cases) {
        int dim = static_cast<int>(c[0]);
        double R1 = c[1], R2 = c[2];
        // The subtraction R1^(2-dim) - r^(2-dim) conditions the round trip;
        // at (5, 0.5, 3) the amplification factor is about 200.
        for (int j = 0; j <= 1000; ++j) {
            double r = R1 + (R2 - R1) * j / 1000;
            double back = h_inverse(dim, R1, h_map(dim, R1, r));
            CHECK(std::fabs(back - r) <= 1e-13 * r);
        }
        // h is increasing, so the domain length is the image of R2.
        CHECK(h_map(dim, R1, R2) > 0.0);
    }
}

TEST_CASE("annulus map rejects out-of-range arguments") {
    CHECK_THROWS(h_map(2, 1.0, 0.5));
    CHECK_THROWS(h_map(1, 1.0, 2.0));
    CHECK_THROWS(h_map(2, 0.0, 2.0));
    CHECK_THROWS(h_inverse(3, 1.0, -0.1));
    CHECK_THROWS(h_inverse(3, 1.0, 1.0));   // reach of the dim=3, R1=1 map is t < 1
    CHECK_THROWS(h_inverse(5, 0.5, 3.0));   // reach here is R1^-3/3 = 8/3
    CHECK_NOTHROW(h_inverse(2, 1.0, 50.0));  // the log map reaches any t

    AnnulusProblem bad = annulus(2, 2.0, 1.0, "1+0*r", 1.0, "s^3");
    CHECK_THROWS(transform(bad));
}

TEST_CASE("transformed problem for a flat weight in dimension 2") {
    AnnulusProblem ap = annulus(2, 1.0, e1, "1+0*r", 1.0, "s^3");
    Problem p = transform(ap);

    CHECK(std::fabs(p.w.length - 1.0) <= 1e-15);
    REQUIRE(p.d.humps() == 1);
    CHECK(p.d.sigma[0] == 0.0);
    CHECK(p.d.tau[0] == p.w.length);

    // a(t) = r(t)^2 = e^{2t}
    for (int j = 0; j <= 200; ++j) {
        double t = p.w.length * j / 200;
        double expect = std::exp(2.0 * t);
        CHECK(std::fabs(p.w.eval(t) - expect) <= 1e-12 * expect);
    }
}

TEST_CASE("transformed problem for a flat weight in dimension 3") {
    AnnulusProblem ap = annulus(3, 1.0, 2.0, "1+0*r", 1.0, "s^3");
    Problem p = transform(ap);

    CHECK(p.w.length == 0.5);
    REQUIRE(p.d.humps() == 1);
    CHECK(p.d.sigma[0] == 0.0);
    CHECK(p.d.tau[0] == 0.5);

    // r(t) = 1/(1-t), so a(t) = r^4 = (1-t)^-4
    for (int j = 0; j <= 200; ++j) {
        double t = 0.5 * j / 200;
        double expect = std::pow(1.0 - t, -4.0);
        CHECK(std::fabs(p.w.eval(t) - expect) <= 1e-12 * expect);
    }
}

TEST_CASE("sign structure survives the change of variables") {
    AnnulusProblem ap = annulus(2, 1.0, e1, "sin(3*(r-1))", 0.5, "100*s*atan(s)");
    Problem p = transform(ap);

    REQUIRE(p.d.humps() == 1);
    CHECK(p.d.sigma[0] == 0.0);
    CHECK(std::fabs(p.d.tau[0] - std::log(1.0 + pi / 3.0)) <= 1e-9);
    CHECK(p.d.length == p.w.length);
    CHECK(validate_decomposition(p.w, p.d).pass);

    // The positive factor r^{2(dim-1)} never flips the sign of the base weight.
    for (int j = 1; j < 500; ++j) {
        double t = p.w.length * j / 500;
        double a = std::sin(3.0 * (h_inverse(2, 1.0, t) - 1.0));
        if (std::fabs(a) < 1e-9) continue;
        CHECK(p.w.base_value(t) * a > 0.0);
    }
}

TEST_CASE("transformed weight and map derivatives obey the chain rule") {
    // With v(r) = sin(pi (r-R1)/(R2-R1)) and u(t) = v(r(t)), the identity
    // u''(t) = r^{2(dim-1)} (v'' + (dim-1)/r v') must hold, and the built
    // weight must equal r^{2(dim-1)} A_mu(r(t)).  Together these make the
    // interval equation equivalent to the radial one.
    for (int dim : {2, 3}) {
        const double R1 = 1.0, R2 = (dim == 2) ? e1 : 2.0;
        AnnulusProblem ap = annulus(dim, R1, R2, "2+cos(r)", 1.0, "100*s*atan(s)");
        Problem p = transform(ap);
        const double L = p.w.length;
        const double k = pi / (R2 - R1);

        auto v = [&](double r) { return std::sin(k * (r - R1)); };
        auto dv = [&](double r) { return k * std::cos(k * (r - R1)); };
        auto d2v = [&](double r) { return -k * k * std::sin(k * (r - R1)); };
        auto u = [&](double t) { return v(h_inverse(dim, R1, t)); };

        const double h = 1e-3 * L;
        for (int j = 0; j <= 500; ++j) {
            double t = 2.0 * h + (L - 4.0 * h) * j / 500;
            double r = h_inverse(dim, R1, t);
            double rpow = std::pow(r, 2.0 * (dim - 1));

            double w_expect = rpow * (2.0 + std::cos(r));
            CHECK(std::fabs(p.w.eval(t) - w_expect) <= 1e-12 * w_expect);

            double u_dd = (-u(t - 2 * h) + 16.0 * u(t - h) - 30.0 * u(t) + 16.0 * u(t + h) -
                           u(t + 2 * h)) /
                          (12.0 * h * h);
            double rhs = rpow * (d2v(r) + (dim - 1) / r * dv(r));
            CHECK(std::fabs(u_dd - rhs) <= 1e-8 * (1.0 + std::fabs(rhs)));
        }
    }
}

TEST_CASE("back-mapped solution matches a direct radial integration") {
    AnnulusProblem ap = annulus(2, 1.0, e1, "1+0*r", 1.0, "s^3");
    Problem p = transform(ap);
    Tolerances tol;
    RootReport roots = isolate_roots(p, 0.0, 10.0, 500, tol);
    REQUIRE(roots.accepted.size() >= 1);
    const Solution& sol = roots.accepted.front();
    CHECK(std::fabs(sol.slope - 4.80654411315918) <= 1e-6);

    RadialSolution rs = back_map(ap, p, sol, tol);
    REQUIRE(rs.r.size() == 2001);
    CHECK(rs.slope == sol.slope);
    CHECK(rs.r.front() == 1.0);
    CHECK(rs.r.back() == e1);
    CHECK(std::fabs(rs.sup_norm - 2.1448501166854634) <= 1e-6);

    // Reference: integrate the radial equation itself on the same radii.
    auto w = [](double) { return 1.0; };
    auto gt = [](double v) { return v > 0.0 ? v * v * v : 0.0; };
    std::vector<double> vr, dvr;
    oracle::radial_shoot(2, w, gt, rs.r, sol.slope, 100, vr, dvr);
    double dev = 0.0, ddev = 0.0;
    for (std::size_t j = 0; j < rs.r.size(); ++j) {
        dev = std::fmax(dev, std::fabs(rs.v[j] - vr[j]));
        ddev = std::fmax(ddev, std::fabs(rs.dv[j] - dvr[j]));
    }
    CHECK(dev <= 1e-6);
    CHECK(ddev <= 1e-6);
}

TEST_CASE("back-mapped solution keeps boundary and positivity properties") {
    AnnulusProblem ap = annulus(2, 1.0, e1, "1+0*r", 1.0, "s^3");
    Problem p = transform(ap);
    Tolerances tol;
    RootReport roots = isolate_roots(p, 0.0, 10.0, 500, tol);
    REQUIRE(roots.accepted.size() >= 1);

    for (const Solution& sol : roots.accepted) {
        RadialSolution rs = back_map(ap, p, sol, tol);
        CHECK(rs.v.front() == 0.0);
        CHECK(std::fabs(rs.v.back()) <= tol.bc_tol);
        CHECK(rs.dv.front() == sol.slope);  // R1 = 1 makes the slopes coincide
        for (std::size_t j = 1; j + 1 < rs.v.size(); ++j) CHECK(rs.v[j] > 0.0);
        CHECK(rs.max_relative_residual <= 1e-6);
    }

    CHECK_THROWS(back_map(ap, p, roots.accepted.front(), tol, 4));
}
