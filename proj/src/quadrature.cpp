#include "topdc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace topdc {
namespace {

constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
};

Piece gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * wgk[7];
  double gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    kron += wgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += wg[j / 2] * (f1 + f2);
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

struct ByError {
  bool operator()(const Piece& x, const Piece& y) const { return x.error < y.error; }
};

}  // namespace

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
  QuadratureResult out;
  if (a == b) return out;
  const double sign = b > a ? 1.0 : -1.0;
  if (b < a) std::swap(a, b);

  std::priority_queue<Piece, std::vector<Piece>, ByError> heap;
  const std::size_t n0 = std::max<std::size_t>(1, options.initial_intervals);
  long double total = 0.0L, total_err = 0.0L;
  for (std::size_t i = 0; i < n0; ++i) {
    const double lo = a + (b - a) * static_cast<double>(i) / static_cast<double>(n0);
    const double hi = i + 1 == n0 ? b : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(n0);
    Piece p = gk15(f, lo, hi);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  out.evaluations = 15 * n0;

  const double min_width = 1e-13 * (b - a);
  std::vector<Piece> frozen;  // too narrow to split further
  while (!heap.empty()) {
    const double tol = std::max(options.abs_tol, options.rel_tol * std::abs(static_cast<double>(total)));
    if (total_err <= tol) break;
    if (heap.size() + frozen.size() >= options.max_intervals) {
      out.converged = false;
      break;
    }
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.b - worst.a < min_width) {
      frozen.push_back(worst);
      out.converged = false;
      continue;
    }
    Piece left = gk15(f, worst.a, mid), right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    total += static_cast<long double>(left.value) + right.value - worst.value;
    total_err += static_cast<long double>(left.error) + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  std::vector<Piece> all = std::move(frozen);
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const Piece& x, const Piece& y) { return x.a < y.a; });
  CompensatedSum value, error;
  for (const Piece& p : all) {
    value.add(p.value);
    error.add(p.error);
  }
  out.value = sign * value.value();
  out.error = error.value();
  out.intervals = all.size();
  const double tol = std::max(options.abs_tol, options.rel_tol * std::abs(out.value));
  if (out.error > tol) out.converged = false;
  return out;
}

}  // namespace topdc
