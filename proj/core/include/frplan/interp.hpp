#pragma once

#include <cstddef>
#include <vector>

namespace frplan {

// Fritsch-Carlson monotone cubic (PCHIP) slopes. Strided access lets callers
// interpolate down the columns of a row-major tensor without copying.
// Preserves monotonicity of the data; n must be >= 2.
void pchip_slopes(const double* x, std::size_t n, const double* y,
                  std::size_t y_stride, double* m, std::size_t m_stride);

// Cubic Hermite evaluation on the segment [x0, x1].
double hermite_eval(double x0, double x1, double y0, double y1, double m0,
                    double m1, double xq);

// Owning PCHIP interpolant over ascending nodes. Queries outside the node
// range are clamped to the end values.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y);

  double operator()(double xq) const;
  std::size_t size() const { return x_.size(); }
  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::vector<double> x_, y_, m_;
};

}  // namespace frplan
