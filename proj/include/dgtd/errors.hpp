#pragma once

#include <stdexcept>
#include <string>

namespace dgtd {

// misconfiguration: unsupported order, bad geometry parameters, bad files
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// invalid mesh: inverted elements, unmatched faces, hanging nodes
struct MeshError : std::runtime_error {
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

// internal API misuse (dimension mismatches, operator/element mismatch)
struct ContractError : std::logic_error {
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

// NaN/Inf detected during time marching
struct InstabilityError : std::runtime_error {
  InstabilityError(const std::string& what, double t, int element)
      : std::runtime_error(what), time(t), element(element) {}
  double time;
  int element;
};

}  // namespace dgtd
