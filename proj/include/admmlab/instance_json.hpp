#pragma once

// JSON form of a PLQ separable problem:
// {"f":[{"q":..,"pieces":[[slope,intercept],...]},...], "g":[...],
//  "A":[[...],...], "B":[[...],...], "b":[...],
//  optional "lambda0", "z0", and "optimal":{"x","z","lambda","f","g"}}

#include <optional>
#include <string>

#include "admmlab/plq.hpp"

namespace admmlab {

struct InstanceFile {
  SeparableProblem problem;
  std::optional<Vector> lambda0;
  std::optional<Vector> z0;
  std::optional<OptimalPair> optimal;
};

// Throws InvalidInput on malformed documents or inconsistent dimensions.
InstanceFile parse_instance_json(const std::string& text);
// Throws IoError when the file cannot be read.
InstanceFile load_instance_json(const std::string& path);
// Throws InvalidInput when a side is an oracle.
std::string instance_to_json(const InstanceFile& inst);

}  // namespace admmlab
