#pragma once

#include <functional>
#include <vector>

namespace frplan {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// 15-point Gauss-Kronrod rule on [a, b]; error is |K15 - G7|.
QuadResult gauss_kronrod_15(const std::function<double(double)>& f, double a,
                            double b);

// Globally adaptive bisection until the summed error estimate is below
// max(abs_tol, rel_tol * |value|). Throws NumericalError (with the achieved
// estimate in the message) if max_intervals is reached first.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, double rel_tol,
                          int max_intervals = 2000);

// Adaptive integral of g over [0, inf) via the substitution x = t / (1 - t).
double integrate_semi_infinite(const std::function<double(double)>& g,
                               double abs_tol, double rel_tol,
                               int max_intervals = 2000);

// Fixed quadrature nodes/weights approximating integral of g over [0, inf) as
// sum(w[i] * g(x[i])). Frozen once per model so that tensor-cached integrands
// share abscissae.
struct PanelGrid {
  std::vector<double> x;
  std::vector<double> w;

  double apply(const std::function<double(double)>& g) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * g(x[i]);
    return s;
  }
};

// Builds a PanelGrid by adaptively refining Gauss-Kronrod panels in the mapped
// variable t until every probe integrand is resolved to
// max(abs_tol, rel_tol * |probe integral|). Throws NumericalError if
// max_panels panels do not suffice.
PanelGrid freeze_semi_infinite_grid(
    const std::vector<std::function<double(double)>>& probes, double abs_tol,
    double rel_tol, int max_panels = 64);

struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section maximization of a unimodal function on [a, b] to the given
// width tolerance in x.
ScalarMax golden_section_max(const std::function<double(double)>& f, double a,
                             double b, double x_tol);

// Smallest x in [lo, hi] with pred(x) true, assuming pred is monotone
// (false..false true..true). Requires pred(hi) == true; the bracket width is
// reduced below x_tol.
double bisect_increasing(const std::function<bool(double)>& pred, double lo,
                         double hi, double x_tol);

}  // namespace frplan
