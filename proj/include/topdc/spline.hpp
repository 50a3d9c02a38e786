#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace topdc {

struct SmoothingOptions {
  // Fixed smoothing weight (dimensionless, relative to the data term). Chosen by
  // generalised cross-validation when empty.
  std::optional<double> lambda;
  double log10_lambda_min = -13.0;
  double log10_lambda_max = 2.0;
};

// Quintic smoothing spline y(x) with knots at the data abscissae and an integrated
// squared third-derivative penalty. Stored in piecewise-polynomial form so that
// values and derivatives up to order 5 evaluate by Horner's rule.
class QuinticSpline {
 public:
  static constexpr int degree = 5;

  static QuinticSpline fit(std::span<const double> x, std::span<const double> y,
                           const SmoothingOptions& options = {});

  double x_min() const { return breaks_.front(); }
  double x_max() const { return breaks_.back(); }
  bool contains(double x) const { return x >= x_min() && x <= x_max(); }

  // Caller must ensure contains(x).
  double value(double x) const;
  double derivative(double x, int order) const;
  std::array<double, 5> derivatives(double x) const;  // orders 0..4

  double lambda() const { return lambda_; }
  double gcv_score() const { return gcv_; }
  double effective_dof() const { return dof_; }
  std::size_t pieces() const { return coeffs_.size(); }

 private:
  std::size_t locate(double x) const;

  std::vector<double> breaks_;
  std::vector<std::array<double, degree + 1>> coeffs_;  // Taylor coefficients per piece
  double lambda_ = 0.0;
  double gcv_ = 0.0;
  double dof_ = 0.0;
};

}  // namespace topdc
