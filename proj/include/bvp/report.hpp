#pragma once

#include <string>

#include "json.hpp"

#include "bvp/eigen.hpp"
#include "bvp/multiplicity.hpp"
#include "bvp/radial.hpp"

namespace bvp {

// All emitted numbers are formatted to 17 significant digits (CSV) or exact
// shortest-round-trip (JSON); both are deterministic byte-for-byte.
std::string fmt17(double v);

nlohmann::ordered_json hypothesis_json(const HypothesisReport& rep);
nlohmann::ordered_json multiplicity_json(const MultiplicityReport& rep,
                                         const std::vector<std::string>& csv_names);

std::string trajectory_csv(const Trajectory& t);
std::string radial_csv(const RadialSolution& rs);
std::string eigen_table_csv(const WeightFunction& w, const Decomposition& d, double lambda0,
                            const std::vector<double>& lambda1);
std::string sweep_csv(const SweepReport& sweep);

}  // namespace bvp
