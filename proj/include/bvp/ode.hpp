#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace bvp {

class IntegrationError : public std::runtime_error {
public:
    explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 0.0;   // 0 picks a starting step automatically
};

struct OdeStats {
    long accepted = 0;
    long rejected = 0;
    long evals = 0;
};

struct OdeOutcome {
    double x = 0.0;        // abscissa actually reached
    bool halted = false;   // stopped early by the halt predicate
    OdeStats stats;
};

namespace detail {

template <std::size_t Dim, std::size_t K>
inline void rk_stage(const std::array<double, Dim>& y, double h,
                     const std::array<double, K>& coeff,
                     const std::array<const std::array<double, Dim>*, K>& ks,
                     std::array<double, Dim>& out) {
    for (std::size_t i = 0; i < Dim; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < K; ++j) acc += coeff[j] * (*ks[j])[i];
        out[i] = y[i] + h * acc;
    }
}

}  // namespace detail

// Dormand-Prince 5(4) embedded pair with FSAL and standard step control.
//
// Integrates y' = f(x, y) from x0 to x1 > x0.  record_at must be sorted,
// strictly increasing, and contained in (x0, x1]; a step never crosses a
// record point, so on_record(x, y) fires with the integration state itself
// (no interpolation).  halt(x, y) is checked after every accepted step and
// ends the integration early when it returns true.
//
// Throws IntegrationError when the step size falls below 1e-14*(x1-x0).
template <std::size_t Dim, class Rhs, class Record, class Halt>
OdeOutcome integrate_dopri5(Rhs&& f, double x0, double x1, std::array<double, Dim>& y,
                            const OdeOptions& opt, std::span<const double> record_at,
                            Record&& on_record, Halt&& halt) {
    using State = std::array<double, Dim>;

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr std::array<double, 1> a2{1.0 / 5};
    static constexpr std::array<double, 2> a3{3.0 / 40, 9.0 / 40};
    static constexpr std::array<double, 3> a4{44.0 / 45, -56.0 / 15, 32.0 / 9};
    static constexpr std::array<double, 4> a5{19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                              -212.0 / 729};
    static constexpr std::array<double, 5> a6{9017.0 / 3168, -355.0 / 33, 46732.0 / 5247,
                                              49.0 / 176, -5103.0 / 18656};
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - bhat: the 5th-vs-4th order error weights (stage 2 weight is zero)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double span = x1 - x0;
    const double hmin = 1e-14 * span;

    OdeOutcome out;
    OdeStats& st = out.stats;

    double x = x0;
    State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;

    auto eval = [&](double xx, const State& yy, State& kk) {
        f(xx, yy, kk);
        ++st.evals;
    };

    eval(x, y, k1);

    // Starting step: crude two-sample estimate, then trust the controller.
    double h = opt.initial_step;
    if (h <= 0.0) {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < Dim; ++i) {
            double sc = opt.atol + opt.rtol * std::fabs(y[i]);
            d0 = std::fmax(d0, std::fabs(y[i]) / sc);
            d1 = std::fmax(d1, std::fabs(k1[i]) / sc);
        }
        h = (d0 < 1e-5 || d1 < 1e-5) ? span * 1e-6 : 0.01 * d0 / d1;
        h = std::fmin(h, span);
    }

    std::size_t rec = 0;
    while (x < x1) {
        double target = x1;
        if (rec < record_at.size() && record_at[rec] < target) target = record_at[rec];

        bool clipped = false;
        if (x + h >= target) {
            h = target - x;
            clipped = true;
        }
        if (h < hmin)
            throw IntegrationError("step size underflow at x = " + std::to_string(x));

        using detail::rk_stage;
        rk_stage<Dim, 1>(y, h, a2, {&k1}, ytmp);
        eval(x + c2 * h, ytmp, k2);
        rk_stage<Dim, 2>(y, h, a3, {&k1, &k2}, ytmp);
        eval(x + c3 * h, ytmp, k3);
        rk_stage<Dim, 3>(y, h, a4, {&k1, &k2, &k3}, ytmp);
        eval(x + c4 * h, ytmp, k4);
        rk_stage<Dim, 4>(y, h, a5, {&k1, &k2, &k3, &k4}, ytmp);
        eval(x + c5 * h, ytmp, k5);
        rk_stage<Dim, 5>(y, h, a6, {&k1, &k2, &k3, &k4, &k5}, ytmp);
        eval(x + h, ytmp, k6);
        for (std::size_t i = 0; i < Dim; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        eval(x + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < Dim; ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            double sc = opt.atol + opt.rtol * std::fmax(std::fabs(y[i]), std::fabs(ynew[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / static_cast<double>(Dim));

        if (std::isfinite(err) && err <= 1.0) {
            ++st.accepted;
            x = clipped ? target : x + h;
            y = ynew;
            k1 = k7;
            if (rec < record_at.size() && x == record_at[rec]) {
                on_record(x, y);
                ++rec;
            }
            if (halt(x, y)) {
                out.x = x;
                out.halted = true;
                return out;
            }
            double fac = 0.9 * std::pow(std::fmax(err, 1e-300), -0.2);
            h *= std::fmin(5.0, std::fmax(0.2, fac));
        } else {
            ++st.rejected;
            double fac = std::isfinite(err) ? 0.9 * std::pow(err, -0.2) : 0.2;
            h *= std::fmin(1.0, std::fmax(0.2, fac));
        }
    }

    out.x = x;
    return out;
}

}  // namespace bvp
