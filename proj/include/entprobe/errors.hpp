#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace entprobe {

/// Paired axes do not have matching extents (or shapes are otherwise
/// incompatible for the requested operation).
class dimension_error : public std::invalid_argument {
public:
  explicit dimension_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-finite data (NaN/Inf) reached a numerical kernel.
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Requested operation exceeds a hard implementation limit (e.g. dense
/// window larger than 6 sites).
class capability_error : public std::invalid_argument {
public:
  explicit capability_error(const std::string& what) : std::invalid_argument(what) {}
};

/// An iterative solver ran out of iterations. Carries the best iterate so
/// callers can decide whether it is still usable.
class convergence_error : public std::runtime_error {
public:
  convergence_error(const std::string& what, double best_value,
                    std::vector<std::complex<double>> best_vector)
      : std::runtime_error(what),
        best_value_(best_value),
        best_vector_(std::move(best_vector)) {}

  double best_value() const { return best_value_; }
  const std::vector<std::complex<double>>& best_vector() const { return best_vector_; }

private:
  double best_value_;
  std::vector<std::complex<double>> best_vector_;
};

/// The contrast projection annihilated the state (norm underflowed even
/// with log-space rescaling).
class degenerate_projection_error : public std::runtime_error {
public:
  explicit degenerate_projection_error(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure, annotated with the offending path.
class io_error : public std::runtime_error {
public:
  io_error(const std::string& what, const std::string& path)
      : std::runtime_error(what + ": " + path), path_(path) {}

  const std::string& path() const { return path_; }

private:
  std::string path_;
};

}  // namespace entprobe
