#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace katolab {

/// Invalid arguments or configuration. Maps to CLI exit status 2.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Solver or quadrature failure. Maps to CLI exit status 3.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Structural defect of a triangle mesh; carries the offending simplices.
class MeshError : public InputError {
public:
  enum class Kind { Parse, NotTriangulated, BoundaryEdge, NonManifoldEdge, NonOrientable, DegenerateFace, Disconnected };

  MeshError(Kind kind, std::string message, std::vector<std::vector<int>> simplices = {})
      : InputError(std::move(message)), kind_(kind), simplices_(std::move(simplices)) {}

  Kind kind() const { return kind_; }

  // For BoundaryEdge: one vertex cycle per hole. Otherwise: offending edges or faces.
  const std::vector<std::vector<int>>& simplices() const { return simplices_; }

private:
  Kind kind_;
  std::vector<std::vector<int>> simplices_;
};

} // namespace katolab
