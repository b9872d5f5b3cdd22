#include "frplan/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "frplan/errors.hpp"

namespace frplan {
namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

double mapped_semi_infinite(const std::function<double(double)>& g, double t) {
  double u = 1.0 - t;
  double x = t / u;
  return g(x) / (u * u);
}

// Upper end of the mapped [0,1) domain; beyond this x > 1e12 and every
// integrand handled here has long since underflowed.
constexpr double kTMax = 1.0 - 1e-12;

}  // namespace

QuadResult gauss_kronrod_15(const std::function<double(double)>& f, double a,
                            double b) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double fc = f(c);
  double resk = kWgk[7] * fc;
  double resg = kWg[3] * fc;
  for (int j = 0; j < 3; ++j) {
    double dx = h * kXgk[2 * j + 1];
    double f1 = f(c - dx);
    double f2 = f(c + dx);
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[2 * j + 1] * (f1 + f2);
  }
  for (int j = 0; j < 4; ++j) {
    double dx = h * kXgk[2 * j];
    double f1 = f(c - dx);
    double f2 = f(c + dx);
    resk += kWgk[2 * j] * (f1 + f2);
  }
  return {resk * h, std::abs((resk - resg) * h)};
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, double rel_tol,
                          int max_intervals) {
  if (a == b) return 0.0;
  std::priority_queue<Interval> heap;
  QuadResult r = gauss_kronrod_15(f, a, b);
  heap.push({a, b, r.value, r.error});
  double total_value = r.value;
  double total_error = r.error;
  int used = 1;
  while (total_error > std::max(abs_tol, rel_tol * std::abs(total_value))) {
    if (used >= max_intervals || heap.top().error == 0.0) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge: achieved error "
          << total_error << " with " << used << " intervals (target "
          << std::max(abs_tol, rel_tol * std::abs(total_value)) << ")";
      throw NumericalError(msg.str());
    }
    Interval worst = heap.top();
    heap.pop();
    total_value -= worst.value;
    total_error -= worst.error;
    double mid = 0.5 * (worst.a + worst.b);
    QuadResult left = gauss_kronrod_15(f, worst.a, mid);
    QuadResult right = gauss_kronrod_15(f, mid, worst.b);
    heap.push({worst.a, mid, left.value, left.error});
    heap.push({mid, worst.b, right.value, right.error});
    total_value += left.value + right.value;
    total_error += left.error + right.error;
    ++used;
  }
  return total_value;
}

double integrate_semi_infinite(const std::function<double(double)>& g,
                               double abs_tol, double rel_tol,
                               int max_intervals) {
  auto mapped = [&g](double t) { return mapped_semi_infinite(g, t); };
  return integrate_adaptive(mapped, 0.0, kTMax, abs_tol, rel_tol,
                            max_intervals);
}

PanelGrid freeze_semi_infinite_grid(
    const std::vector<std::function<double(double)>>& probes, double abs_tol,
    double rel_tol, int max_panels) {
  if (probes.empty()) throw NumericalError("panel grid needs at least one probe");
  const std::size_t np = probes.size();

  struct Panel {
    double a, b;
    std::vector<double> value, error;  // per probe
  };
  auto evaluate = [&](double a, double b) {
    Panel p{a, b, std::vector<double>(np), std::vector<double>(np)};
    for (std::size_t i = 0; i < np; ++i) {
      auto mapped = [&](double t) { return mapped_semi_infinite(probes[i], t); };
      QuadResult r = gauss_kronrod_15(mapped, a, b);
      p.value[i] = r.value;
      p.error[i] = r.error;
    }
    return p;
  };

  // Seed boundaries cluster near both ends of the mapped domain, where the
  // integrands change fastest (x near 0 and the decaying tail).
  const double seeds[] = {0.0,  1e-5, 1e-4, 1e-3, 0.01, 0.05, 0.125, 0.25,
                          0.375, 0.5,  0.625, 0.75, 0.85, 0.925, 0.97, 0.99,
                          0.999, kTMax};
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < std::size(seeds); ++i) {
    panels.push_back(evaluate(seeds[i], seeds[i + 1]));
  }

  auto converged = [&](std::vector<double>* score_out) {
    std::vector<double> total(np, 0.0), err(np, 0.0);
    for (const Panel& p : panels) {
      for (std::size_t i = 0; i < np; ++i) {
        total[i] += p.value[i];
        err[i] += p.error[i];
      }
    }
    bool ok = true;
    std::vector<double> tol(np);
    for (std::size_t i = 0; i < np; ++i) {
      tol[i] = std::max(abs_tol, rel_tol * std::abs(total[i]));
      if (err[i] > tol[i]) ok = false;
    }
    if (score_out) *score_out = std::move(tol);
    return ok;
  };

  std::vector<double> tol;
  while (!converged(&tol)) {
    if (static_cast<int>(panels.size()) >= max_panels) {
      throw NumericalError(
          "frozen quadrature grid did not meet tolerance within panel budget");
    }
    std::size_t worst = 0;
    double worst_score = -1.0;
    for (std::size_t j = 0; j < panels.size(); ++j) {
      double score = 0.0;
      for (std::size_t i = 0; i < np; ++i) score += panels[j].error[i] / tol[i];
      if (score > worst_score) {
        worst_score = score;
        worst = j;
      }
    }
    Panel old = panels[worst];
    double mid = 0.5 * (old.a + old.b);
    panels[worst] = evaluate(old.a, mid);
    panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1,
                  evaluate(mid, old.b));
  }

  std::sort(panels.begin(), panels.end(),
            [](const Panel& l, const Panel& r) { return l.a < r.a; });
  PanelGrid grid;
  grid.x.reserve(panels.size() * 15);
  grid.w.reserve(panels.size() * 15);
  auto push_node = [&grid](double t, double wt) {
    double u = 1.0 - t;
    grid.x.push_back(t / u);
    grid.w.push_back(wt / (u * u));
  };
  for (const Panel& p : panels) {
    double c = 0.5 * (p.a + p.b);
    double h = 0.5 * (p.b - p.a);
    // All 15 Kronrod nodes of the panel, in ascending t, with the map
    // jacobian folded into the weights.
    for (int j = 0; j < 7; ++j) push_node(c - h * kXgk[j], h * kWgk[j]);
    push_node(c, h * kWgk[7]);
    for (int j = 6; j >= 0; --j) push_node(c + h * kXgk[j], h * kWgk[j]);
  }
  return grid;
}

ScalarMax golden_section_max(const std::function<double(double)>& f, double a,
                             double b, double x_tol) {
  const double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > x_tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
  }
  double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

double bisect_increasing(const std::function<bool(double)>& pred, double lo,
                         double hi, double x_tol) {
  if (!pred(hi)) {
    throw NumericalError("bisection bracket invalid: pred(hi) is false");
  }
  if (pred(lo)) return lo;
  while (hi - lo > x_tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // ran out of representable midpoints
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace frplan
