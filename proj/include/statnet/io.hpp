#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "statnet/dynamics.hpp"
#include "statnet/feedforward.hpp"
#include "statnet/hebbian.hpp"
#include "statnet/tsp.hpp"

namespace statnet::io {

/// Thrown for malformed input files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// {"readout": n, "layers": [{"rows", "cols", "activation", "gain",
/// "linear_units", "shared_group", "weights": row-major}]}
nlohmann::json network_to_json(const LayeredNetwork& net);
LayeredNetwork network_from_json(const nlohmann::json& j);

/// One pattern per line using '+'/'-' or '1'/'0'. Blank lines and lines
/// starting with '#' are skipped.
PatternSet read_patterns(std::istream& in);
PatternSet load_patterns(const std::string& path);

/// Header names columns x* (inputs) then y* (targets), e.g. "x0,x1,y0".
TrainingBatch read_training_csv(std::istream& in);
TrainingBatch load_training_csv(const std::string& path);

/// "x,y" rows, optional header.
TspInstance read_cities_csv(std::istream& in);
TspInstance load_cities_csv(const std::string& path);

/// Columns time, energy, v_0 .. v_{n-1}.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace statnet::io
