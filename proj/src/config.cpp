#include "bvp/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bvp {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config: key '" + key + "': '" + v + "' is not a number");
    return d;
}

int parse_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    long d = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("config: key '" + key + "': '" + v + "' is not an integer");
    return static_cast<int>(d);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("config: key '" + key + "': empty list element");
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("config: key '" + key + "': empty list");
    return out;
}

}  // namespace

void Config::apply(const std::string& key, const std::string& value) {
    if (key == "L") L = parse_double(key, value);
    else if (key == "N") N = parse_int(key, value);
    else if (key == "R1") R1 = parse_double(key, value);
    else if (key == "R2") R2 = parse_double(key, value);
    else if (key == "weight") weight = value;
    else if (key == "A") A = value;
    else if (key == "mu") mu = parse_double(key, value);
    else if (key == "mu_values") mu_values = parse_list(key, value);
    else if (key == "sigma") sigma = parse_list(key, value);
    else if (key == "tau") tau = parse_list(key, value);
    else if (key == "g") g = value;
    else if (key == "d_min") d_min = parse_double(key, value);
    else if (key == "d_max") d_max = parse_double(key, value);
    else if (key == "slope_grid") slope_grid = parse_int(key, value);
    else if (key == "rtol") rtol = parse_double(key, value);
    else if (key == "atol") atol = parse_double(key, value);
    else if (key == "bc_tol") bc_tol = parse_double(key, value);
    else if (key == "sign_tol") sign_tol = parse_double(key, value);
    else if (key == "curv_tol") curv_tol = parse_double(key, value);
    else if (key == "grid") grid = parse_int(key, value);
    else if (key == "output_points") output_points = parse_int(key, value);
    else if (key == "u_cap") u_cap = parse_double(key, value);
    else if (key == "r") r = parse_double(key, value);
    else if (key == "r_delta_frac") r_delta_frac = parse_double(key, value);
    else if (key == "r_grid") r_grid = parse_int(key, value);
    else if (key == "s_lo") s_lo = parse_double(key, value);
    else if (key == "s_hi") s_hi = parse_double(key, value);
    else if (key == "out_dir") out_dir = value;
    else if (key == "threads") threads = parse_int(key, value);
    else throw ConfigError("config: unknown key '" + key + "'");
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    Config c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: " + path + ":" + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config: " + path + ":" + std::to_string(lineno) + ": empty key");
        try {
            c.apply(key, value);
        } catch (const ConfigError& e) {
            std::string msg = e.what();
            if (msg.rfind("config: ", 0) == 0) msg = msg.substr(8);
            throw ConfigError("config: " + path + ":" + std::to_string(lineno) + ": " + msg);
        }
    }
    return c;
}

std::string Config::describe_keys() {
    return
        "Configuration keys (key = value, one per line, '#' comments):\n"
        "  L             domain length of the interval problem\n"
        "  weight        base weight expression a(x), variable x\n"
        "  mu            negative-part scaling mu >= 0\n"
        "  mu_values     comma list of mu values for 'sweep'\n"
        "  sigma, tau    comma lists overriding the hump decomposition\n"
        "  g             nonlinearity expression g(s), variable s; g(0) = 0\n"
        "  N, R1, R2     annulus dimension and radii for 'radial'\n"
        "  A             radial base weight expression A(r), variable r\n"
        "  d_min, d_max  shooting slope range (left end excluded); defaults 0, 5\n"
        "  slope_grid    slope scan points (default 500)\n"
        "  rtol, atol    integrator tolerances (defaults 1e-10, 1e-12)\n"
        "  bc_tol        accepted |u(L)| at the far boundary (default 1e-8)\n"
        "  sign_tol      sign classification band for the weight (default 1e-12)\n"
        "  curv_tol      slack for the curvature checks (default 1e-2)\n"
        "  grid          weight sampling grid (default 4096)\n"
        "  output_points dense trajectory samples (default 2001)\n"
        "  u_cap         escape threshold on |u| (default 1e6)\n"
        "  r             explicit smallness radius for signatures\n"
        "  r_delta_frac  else choose r with delta = frac * lambda0 (default 0.1)\n"
        "  r_grid        radius grid for the automatic choice (default 241)\n"
        "  s_lo, s_hi    sampling anchors for g(s)/s near 0 and infinity\n"
        "  out_dir       output directory (default 'out')\n"
        "  threads       OpenMP threads, 0 = default\n";
}

}  // namespace bvp
