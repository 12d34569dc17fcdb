#ifndef RUVSTAR_ERRORS_HPP
#define RUVSTAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ruvstar {

// Base for all model/numerical errors. Input-format problems use
// std::runtime_error subclasses in tsv.hpp instead.
class RuvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankDeficiencyError : public RuvError {
 public:
  using RuvError::RuvError;
};

class InsufficientSamplesError : public RuvError {
 public:
  using RuvError::RuvError;
};

class ZeroDofError : public RuvError {
 public:
  using RuvError::RuvError;
};

class ShapeError : public RuvError {
 public:
  using RuvError::RuvError;
};

class RankError : public RuvError {
 public:
  using RuvError::RuvError;
};

class DegenerateInputError : public RuvError {
 public:
  using RuvError::RuvError;
};

class SingularControlError : public RuvError {
 public:
  using RuvError::RuvError;
};

class CollinearityError : public RuvError {
 public:
  using RuvError::RuvError;
};

class NumericalError : public RuvError {
 public:
  using RuvError::RuvError;
};

class PriorSupportError : public RuvError {
 public:
  using RuvError::RuvError;
};

class DegenerateCalibrationError : public RuvError {
 public:
  using RuvError::RuvError;
};

}  // namespace ruvstar

#endif  // RUVSTAR_ERRORS_HPP
