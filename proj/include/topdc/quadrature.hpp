#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace topdc {

// sin(x)/x with the removable singularity handled by its series.
double sinc(double x);

// Kahan-Babuska-Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> values);

struct QuadratureOptions {
  double rel_tol = 1e-6;
  double abs_tol = 0.0;
  std::size_t max_intervals = 4000;
  std::size_t initial_intervals = 1;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  bool converged = true;
};

// Adaptive 7/15-point Gauss-Kronrod with global error control. The final sum runs
// over intervals in left-endpoint order, so the result does not depend on the
// order in which intervals were refined.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

}  // namespace topdc
