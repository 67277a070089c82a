#pragma once

#include <stdexcept>
#include <string>

namespace dnlab {

/// Invalid user input (bad file, schema violation, dimension mismatch).
/// The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numeric hypothesis failed (singular block, broken sign condition...).
/// The CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The interior block of the (possibly perturbed) energy matrix has an
/// eigenvalue at zero, so the harmonic-extension problem has no unique
/// solution.
struct SingularInterior : NumericError {
  explicit SingularInterior(const std::string& msg) : NumericError(msg) {}
};

/// A matrix expected to have nonpositive off-diagonal entries does not.
struct NotMarkovian : NumericError {
  explicit NotMarkovian(const std::string& msg) : NumericError(msg) {}
};

/// lambda is at or below half the first Dirichlet eigenvalue, so
/// E_x[e^{-lambda tau}] is unbounded.
struct NotGaugeable : NumericError {
  explicit NotGaugeable(const std::string& msg) : NumericError(msg) {}
};

/// h-transform input h has a nonpositive component.
struct NonPositiveH : NumericError {
  explicit NonPositiveH(const std::string& msg) : NumericError(msg) {}
};

/// h is not alpha-excessive where the operation requires it.
struct NotExcessive : NumericError {
  explicit NotExcessive(const std::string& msg) : NumericError(msg) {}
};

/// DN difference has off-diagonal mass: the perturbation is not
/// boundary-supported, so diagonal recovery does not apply.
struct NonDiagonalDifference : NumericError {
  explicit NonDiagonalDifference(const std::string& msg) : NumericError(msg) {}
};

}  // namespace dnlab
