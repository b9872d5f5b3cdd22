#include "frplan/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frplan {
namespace {

// Shape-preserving endpoint slope (three-point formula with the usual
// limiting so the end segment cannot overshoot).
double edge_slope(double h0, double h1, double d0, double d1) {
  double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (m * d0 <= 0.0) return 0.0;
  if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
  return m;
}

}  // namespace

void pchip_slopes(const double* x, std::size_t n, const double* y,
                  std::size_t y_stride, double* m, std::size_t m_stride) {
  if (n < 2) throw std::invalid_argument("pchip_slopes: need at least 2 nodes");
  auto yv = [&](std::size_t i) { return y[i * y_stride]; };
  auto mv = [&](std::size_t i) -> double& { return m[i * m_stride]; };
  if (n == 2) {
    double d = (yv(1) - yv(0)) / (x[1] - x[0]);
    mv(0) = d;
    mv(1) = d;
    return;
  }
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    d[i] = (yv(i + 1) - yv(i)) / h[i];
  }
  mv(0) = edge_slope(h[0], h[1], d[0], d[1]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      mv(i) = 0.0;
    } else {
      double w1 = 2.0 * h[i] + h[i - 1];
      double w2 = h[i] + 2.0 * h[i - 1];
      mv(i) = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  mv(n - 1) = edge_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

double hermite_eval(double x0, double x1, double y0, double y1, double m0,
                    double m1, double xq) {
  double h = x1 - x0;
  double s = (xq - x0) / h;
  double s2 = s * s;
  double s3 = s2 * s;
  return y0 * (2.0 * s3 - 3.0 * s2 + 1.0) + m0 * h * (s3 - 2.0 * s2 + s) +
         y1 * (3.0 * s2 - 2.0 * s3) + m1 * h * (s3 - s2);
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)), m_(x_.size()) {
  if (x_.size() != y_.size() || x_.size() < 2) {
    throw std::invalid_argument("Pchip: need matching node/value arrays, n >= 2");
  }
  pchip_slopes(x_.data(), x_.size(), y_.data(), 1, m_.data(), 1);
}

double Pchip::operator()(double xq) const {
  if (xq <= x_.front()) return y_.front();
  if (xq >= x_.back()) return y_.back();
  auto it = std::upper_bound(x_.begin(), x_.end(), xq);
  std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  return hermite_eval(x_[i], x_[i + 1], y_[i], y_[i + 1], m_[i], m_[i + 1], xq);
}

}  // namespace frplan
