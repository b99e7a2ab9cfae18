#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvp {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Flat key = value configuration.  '#' starts a comment; list values are
// comma-separated.  Unknown keys are rejected so typos fail loudly.
struct Config {
    // interval geometry (solve/sweep/eig/check) or annulus geometry (radial)
    std::optional<double> L;
    std::optional<int> N;
    std::optional<double> R1, R2;

    std::optional<std::string> weight;        // a(x) for the interval problem
    std::optional<std::string> A;             // A(r) for the annulus problem
    std::optional<double> mu;
    std::vector<double> mu_values;            // sweep grid
    std::vector<double> sigma, tau;           // explicit decomposition override
    std::optional<std::string> g;             // g(s)

    double d_min = 0.0;
    double d_max = 5.0;
    int slope_grid = 500;

    double rtol = 1e-10;
    double atol = 1e-12;
    double bc_tol = 1e-8;
    double sign_tol = 1e-12;
    double curv_tol = 1e-2;
    int grid = 4096;             // weight sampling grid
    int output_points = 2001;    // dense trajectory grid
    double u_cap = 1e6;

    std::optional<double> r;     // explicit smallness radius
    double r_delta_frac = 0.1;   // else choose_r with delta = frac * lambda0
    int r_grid = 241;

    double s_lo = 1e-8;
    double s_hi = 1e8;

    std::string out_dir = "out";
    int threads = 0;             // 0 = library default

    static Config from_file(const std::string& path);
    // key=value override, same syntax and schema as the file.
    void apply(const std::string& key, const std::string& value);

    // One line per key: name, type, default, meaning.  Used by --help.
    static std::string describe_keys();
};

}  // namespace bvp
