#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ballmapper {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied parameter is outside its domain (epsilon <= 0, k > N, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// The data itself is unusable: malformed files, asymmetric matrices,
// points left uncovered at the requested radius.
class DataError : public Error {
 public:
  using Error::Error;
};

// An internal invariant failed. Seeing one of these is a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

class CoverageError : public DataError {
 public:
  CoverageError(std::size_t point, double nearest)
      : DataError("point " + std::to_string(point) +
                  " is not covered; nearest center at distance " +
                  std::to_string(nearest)),
        point_(point),
        nearest_(nearest) {}

  std::size_t point() const noexcept { return point_; }
  double nearest_distance() const noexcept { return nearest_; }

 private:
  std::size_t point_;
  double nearest_;
};

class CoverBlowupError : public DataError {
 public:
  CoverBlowupError(std::size_t point, std::size_t covers, std::size_t guard)
      : DataError("point " + std::to_string(point) + " is covered by " +
                  std::to_string(covers) + " centers, above the guard of " +
                  std::to_string(guard)),
        point_(point) {}

  std::size_t point() const noexcept { return point_; }

 private:
  std::size_t point_;
};

}  // namespace ballmapper
