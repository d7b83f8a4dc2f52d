#pragma once

#include <stdexcept>
#include <string>

namespace toda {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : Error { using Error::Error; };
// Seed row or boundary of the coefficient window is not on the background yet.
struct WindowError : Error { using Error::Error; };
// a(n) <= 0 encountered (the operator requires positive off-diagonal entries).
struct InstabilityError : Error { using Error::Error; };
struct BoundaryContaminationError : Error { using Error::Error; };
struct BracketError : Error { using Error::Error; };
struct BranchError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace toda
