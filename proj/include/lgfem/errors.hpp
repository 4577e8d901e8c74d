#pragma once

#include <stdexcept>
#include <string>

namespace lgfem {

/// Time increment too large for the linearized characteristic map to be
/// bijective with Jacobian in [1/2, 3/2].
class TimestepViolation : public std::runtime_error {
 public:
  TimestepViolation(int element, double product, double jacobian, const std::string& what)
      : std::runtime_error(what), element_(element), product_(product), jacobian_(jacobian) {}

  int element() const { return element_; }
  double product() const { return product_; }
  double jacobian() const { return jacobian_; }

 private:
  int element_;
  double product_;
  double jacobian_;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(double residual, int iterations, const std::string& what)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

class DegenerateMap : public std::runtime_error {
 public:
  DegenerateMap(int element, double det, const std::string& what)
      : std::runtime_error(what), element_(element), det_(det) {}

  int element() const { return element_; }
  double det() const { return det_; }

 private:
  int element_;
  double det_;
};

}  // namespace lgfem
