#include "topdc/spline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "topdc/error.hpp"

namespace topdc {
namespace {

constexpr int p = QuinticSpline::degree;

// Knot span index s with U[s] <= t < U[s+1], clamped at the right end.
int find_span(const std::vector<double>& U, int n_basis, double t) {
  if (t >= U[n_basis]) return n_basis - 1;
  if (t <= U[p]) return p;
  auto it = std::upper_bound(U.begin() + p, U.begin() + n_basis + 1, t);
  return static_cast<int>(it - U.begin()) - 1;
}

// Nonzero basis functions on span s and their derivatives up to order n
// (Piegl and Tiller, algorithm A2.3). ders[k][j] is the k-th derivative of
// basis function s - p + j.
void basis_derivatives(const std::vector<double>& U, int s, double t, int n,
                       double ders[p + 1][p + 1]) {
  double ndu[p + 1][p + 1];
  double left[p + 1], right[p + 1];
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = t - U[s + 1 - j];
    right[j] = U[s + j] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];
  double a[2][p + 1];
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= n; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        d += a[s2][k] * ndu[r][pk];
      }
      ders[k][r] = d;
      std::swap(s1, s2);
    }
  }
  double f = p;
  for (int k = 1; k <= n; ++k) {
    for (int j = 0; j <= p; ++j) ders[k][j] *= f;
    f *= (p - k);
  }
}

struct Trial {
  double log10_lambda;
  double gcv;
  double dof;
  Eigen::VectorXd coef;
};

class Fitter {
 public:
  Fitter(const std::vector<double>& t, const Eigen::VectorXd& r) : t_(t), r_(r) {
    const int n = static_cast<int>(t.size());
    n_basis_ = n + p - 1;
    U_.assign(p + 1, 0.0);
    for (int i = 1; i < n - 1; ++i) U_.push_back(t[i]);
    U_.insert(U_.end(), p + 1, 1.0);

    B_ = Eigen::MatrixXd::Zero(n, n_basis_);
    double ders[p + 1][p + 1];
    for (int i = 0; i < n; ++i) {
      const int s = find_span(U_, n_basis_, t[i]);
      basis_derivatives(U_, s, t[i], 0, ders);
      for (int j = 0; j <= p; ++j) B_(i, s - p + j) = ders[0][j];
    }

    // Third derivatives are quadratic per interval, so 3-point Gauss rules are exact.
    const double g = std::sqrt(0.6);
    const double nodes[3] = {-g, 0.0, g};
    const double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    E_ = Eigen::MatrixXd::Zero(3 * (n - 1), n_basis_);
    for (int i = 0; i + 1 < n; ++i) {
      const double a = t[i], b = t[i + 1], half = 0.5 * (b - a);
      for (int q = 0; q < 3; ++q) {
        const double tq = a + half * (1.0 + nodes[q]);
        const int s = find_span(U_, n_basis_, tq);
        basis_derivatives(U_, s, tq, 3, ders);
        const double w = std::sqrt(weights[q] * half);
        for (int j = 0; j <= p; ++j) E_(3 * i + q, s - p + j) = w * ders[3][j];
      }
    }
    penalty_scale_ = B_.squaredNorm() / E_.squaredNorm();
  }

  Trial solve(double log10_lambda) const {
    const int n = static_cast<int>(B_.rows());
    const int m = n_basis_;
    const double mu = std::sqrt(std::pow(10.0, log10_lambda) * penalty_scale_);
    Eigen::MatrixXd A(B_.rows() + E_.rows(), m);
    A << B_, mu * E_;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(A.rows());
    rhs.head(n) = r_;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Trial out;
    out.log10_lambda = log10_lambda;
    out.coef = qr.solve(rhs);
    const Eigen::MatrixXd R = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    // Hat-matrix trace: H = B R^-1 R^-T B^T, so tr H = ||B R^-1||_F^2.
    const Eigen::MatrixXd X =
        R.triangularView<Eigen::Upper>().transpose().solve(B_.transpose());
    out.dof = X.squaredNorm();
    const double rss = (B_ * out.coef - r_).squaredNorm();
    const double denom = std::max(n - out.dof, 1e-300);
    out.gcv = n * rss / (denom * denom);
    return out;
  }

  const std::vector<double>& knots() const { return U_; }
  int n_basis() const { return n_basis_; }

 private:
  const std::vector<double>& t_;
  Eigen::VectorXd r_;
  std::vector<double> U_;
  int n_basis_ = 0;
  Eigen::MatrixXd B_;
  Eigen::MatrixXd E_;
  double penalty_scale_ = 1.0;
};

Trial choose_by_gcv(const Fitter& fitter, const SmoothingOptions& opt) {
  std::vector<Trial> grid;
  for (double l = opt.log10_lambda_min; l <= opt.log10_lambda_max + 1e-9; l += 1.0) {
    grid.push_back(fitter.solve(l));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i].gcv < grid[best].gcv) best = i;
  }
  double a = grid[best].log10_lambda - (best > 0 ? 1.0 : 0.0);
  double b = grid[best].log10_lambda + (best + 1 < grid.size() ? 1.0 : 0.0);
  Trial incumbent = std::move(grid[best]);
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  Trial tc = fitter.solve(c), td = fitter.solve(d);
  for (int it = 0; it < 12; ++it) {
    if (tc.gcv < td.gcv) {
      b = d;
      d = c;
      td = std::move(tc);
      c = b - invphi * (b - a);
      tc = fitter.solve(c);
    } else {
      a = c;
      c = d;
      tc = std::move(td);
      d = a + invphi * (b - a);
      td = fitter.solve(d);
    }
  }
  Trial& refined = tc.gcv < td.gcv ? tc : td;
  return refined.gcv < incumbent.gcv ? std::move(refined) : std::move(incumbent);
}

}  // namespace

QuinticSpline QuinticSpline::fit(std::span<const double> x, std::span<const double> y,
                                 const SmoothingOptions& options) {
  const std::size_t n = x.size();
  if (y.size() != n) throw DomainError("spline: x and y sizes differ");
  if (n < 8) throw DomainError("spline: need at least 8 samples, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw DomainError("spline: non-finite sample at index " + std::to_string(i));
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw DomainError("spline: abscissae not strictly increasing at index " +
                        std::to_string(i));
    }
  }

  const double x0 = x[0];
  const double h = x[n - 1] - x[0];
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = (x[i] - x0) / h;
  t.back() = 1.0;

  // Quadratics lie in the penalty null space and are reproduced exactly, so remove
  // the least-squares quadratic first and fit the small remainder.
  Eigen::MatrixXd V(n, 3);
  Eigen::VectorXd Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = t[i] - 0.5;
    V(i, 0) = 1.0;
    V(i, 1) = u;
    V(i, 2) = u * u;
    Y(i) = y[i];
  }
  const Eigen::Vector3d q = V.colPivHouseholderQr().solve(Y);
  Eigen::VectorXd r = Y - V * q;
  double scale = r.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) scale = 1.0;
  r /= scale;

  Fitter fitter(t, r);
  Trial chosen = options.lambda
                     ? fitter.solve(std::log10(std::max(*options.lambda, 1e-300)))
                     : choose_by_gcv(fitter, options);

  QuinticSpline s;
  s.lambda_ = std::pow(10.0, chosen.log10_lambda);
  s.gcv_ = chosen.gcv;
  s.dof_ = chosen.dof;
  s.breaks_.assign(x.begin(), x.end());
  s.coeffs_.resize(n - 1);

  const auto& U = fitter.knots();
  double ders[p + 1][p + 1];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const int span = find_span(U, fitter.n_basis(), t[i]);
    basis_derivatives(U, span, t[i], p, ders);
    const double u = t[i] - 0.5;
    std::array<double, p + 1> a{};
    double hk = 1.0, fact = 1.0;
    for (int k = 0; k <= p; ++k) {
      if (k > 0) {
        hk *= h;
        fact *= k;
      }
      double dk = 0.0;
      for (int j = 0; j <= p; ++j) dk += chosen.coef(span - p + j) * ders[k][j];
      a[k] = scale * dk / (fact * hk);
    }
    a[0] += q(0) + q(1) * u + q(2) * u * u;
    a[1] += (q(1) + 2.0 * q(2) * u) / h;
    a[2] += q(2) / (h * h);
    s.coeffs_[i] = a;
  }
  return s;
}

std::size_t QuinticSpline::locate(double x) const {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t idx = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return std::min(idx, coeffs_.size() - 1);
}

double QuinticSpline::value(double x) const {
  const std::size_t i = locate(x);
  const auto& a = coeffs_[i];
  const double dx = x - breaks_[i];
  double v = a[p];
  for (int k = p - 1; k >= 0; --k) v = v * dx + a[k];
  return v;
}

double QuinticSpline::derivative(double x, int order) const {
  if (order < 0) throw DomainError("spline: negative derivative order");
  if (order > p) return 0.0;
  const std::size_t i = locate(x);
  const auto& a = coeffs_[i];
  const double dx = x - breaks_[i];
  double v = 0.0;
  for (int k = p; k >= order; --k) {
    double falling = 1.0;
    for (int j = 0; j < order; ++j) falling *= (k - j);
    v = v * dx + falling * a[k];
  }
  return v;
}

std::array<double, 5> QuinticSpline::derivatives(double x) const {
  std::array<double, 5> out{};
  for (int k = 0; k < 5; ++k) out[k] = derivative(x, k);
  return out;
}

}  // namespace topdc
