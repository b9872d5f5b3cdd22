#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "frplan/geometry.hpp"
#include "frplan/radio.hpp"
#include "frplan/throughput.hpp"

namespace frplan {

// Search grids for the design solvers. The region split omega is swept
// uniformly over [R_0m/R_m, 1]; the FFR spectrum share is restricted to the
// exact feasible set; the SFR power factor is swept uniformly and then
// polished locally by golden section around the grid winner.
struct DesignGrids {
  double omega_step = 0.01;
  double beta_step = 0.02;
  double beta_polish_tol = 1e-5;
  double omega_polish_tol = 1e-4;  // FxD refinement target
};

// Maximize cell throughput subject to a floor on the 5th-percentile rate.
struct R5pD {
  double v_o = 0.0;  // bps
};

// Fixed spectrum/power factor: only the region split is optimized.
struct FxD {
  double zeta_o = 0.5;
};

// Maximize cell throughput subject to a per-user edge/center quality ratio.
struct QoScD {
  double quality = 0.2;  // required tau_edge / tau_center fraction
};

struct DesignProblem {
  NetworkProfile profile;
  CellGeometry geom;
  Scheme scheme = Scheme::ffr;
  std::variant<R5pD, FxD, QoScD> design = R5pD{};
  DesignGrids grids;
  ModelOptions model;
  int threads = 0;  // 0 = default worker count

  void validate() const;
};

// One evaluated design point. r5 carries the 5th percentile of the raw user
// throughput CDF; it is undefined when the occupancy mass cannot reach 5%.
struct GridEvaluation {
  double omega = 0.0;
  double zeta = 0.0;
  double eta_total = 0.0;
  double eta_center = 0.0;
  double eta_edge = 0.0;
  double r5 = 0.0;
  bool r5_defined = false;
  std::optional<double> tau_center;
  std::optional<double> tau_edge;
};

struct DesignSolution {
  bool feasible = false;
  double omega = 0.0;
  double zeta = 0.0;
  double eta_total = 0.0;
  double eta_center = 0.0;
  double eta_edge = 0.0;
  double achieved_r5 = 0.0;
  std::optional<double> tau_center;
  std::optional<double> tau_edge;
  // Every grid point evaluated during the search (polish points excluded).
  std::vector<GridEvaluation> trace;
};

// Dense evaluation of the (omega, zeta) search grid, shared by the solvers:
// the grid metrics do not depend on the design constraints, so one table
// serves every constraint level (e.g. a whole Pareto front).
class DesignSpace {
 public:
  explicit DesignSpace(const DesignProblem& problem);

  const DesignProblem& problem() const { return prob_; }
  const std::vector<double>& omega_grid() const { return omegas_; }
  const std::vector<double>& zeta_grid() const { return zetas_; }
  const std::vector<GridEvaluation>& evaluations() const { return evals_; }

  // Evaluate an arbitrary design point (used by the polish steps). Master
  // tables are reused when the point shares the grid's power structure.
  GridEvaluation evaluate(double omega, double zeta) const;
  // As evaluate, but never stores new master tables in the shared cache;
  // meant for one-off probes with a power structure off the grid.
  GridEvaluation evaluate_detached(double omega, double zeta) const;

 private:
  GridEvaluation eval_with(double omega, double zeta,
                           MasterTableCache* cache) const;

  DesignProblem prob_;
  BsLayout layout_;
  std::vector<double> omegas_;
  std::vector<double> zetas_;
  std::vector<GridEvaluation> evals_;
  mutable MasterTableCache cache_;
};

// Constraint predicates and the deterministic preference order used by the
// solvers, exposed so sweep reports stay consistent with solver decisions.
bool evaluation_meets_rate_floor(const GridEvaluation& e, double v_o);
bool evaluation_meets_quality(const GridEvaluation& e, double quality);
bool evaluation_preferred(const GridEvaluation& a, const GridEvaluation& b);

// Constraint-aware solvers over a prebuilt space. Ties in the objective are
// broken toward larger achieved 5th-percentile rate, then smaller omega.
DesignSolution solve_r5pd(const DesignSpace& space, double v_o);
DesignSolution solve_fxd(const DesignSpace& space);
DesignSolution solve_qoscd(const DesignSpace& space, double quality);

// Convenience entry points that build the space from the problem's design.
DesignSolution solve_r5pd(const DesignProblem& problem);
DesignSolution solve_fxd(const DesignProblem& problem);
DesignSolution solve_qoscd(const DesignProblem& problem);

struct ParetoPoint {
  double v_o = 0.0;
  bool feasible = false;
  double achieved_r5 = 0.0;
  double eta_total = 0.0;
  double omega = 0.0;
  double zeta = 0.0;
};

// One constrained solve per target rate (ascending grid).
std::vector<ParetoPoint> pareto_front(const DesignSpace& space,
                                      const std::vector<double>& v_o_grid);

}  // namespace frplan
