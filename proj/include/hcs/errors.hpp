#pragma once

#include <stdexcept>
#include <string>

namespace hcs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation point outside the chart domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Metric not symmetric positive definite at the evaluation point.
class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

// Bad constructor or registry parameter (unknown name, odd dimension, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Form degree outside the range an operator accepts.
class ValenceError : public Error {
 public:
  using Error::Error;
};

// Operation requires structure the manifold does not have (e.g. quadrature).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Matrix with real eigenvalues cannot be projected onto {J^2 = -I}.
class NotRetractableError : public Error {
 public:
  using Error::Error;
};

}  // namespace hcs
