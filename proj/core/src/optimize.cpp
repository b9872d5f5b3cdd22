#include "frplan/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "frplan/errors.hpp"
#include "frplan/parallel.hpp"
#include "frplan/quadrature.hpp"

namespace frplan {

namespace {

// A rate floor counts as met when the achieved percentile is within one part
// in 10^6 of the target, so grid winners are not lost to roundoff.
constexpr double kRateFloorRelTol = 1e-6;
constexpr double kQualityRelTol = 1e-12;
// Base score for infeasible points during the local polish; scaled by the
// violation so the search is still driven toward the feasible set.
constexpr double kInfeasibleScore = -1e30;

bool meets_rate_floor(const GridEvaluation& e, double v_o) {
  if (v_o <= 0.0) return true;
  return e.r5_defined && e.r5 >= v_o * (1.0 - kRateFloorRelTol);
}

double rate_floor_violation(const GridEvaluation& e, double v_o) {
  double r5 = e.r5_defined ? e.r5 : 0.0;
  return std::max(0.0, (v_o - r5) / std::max(v_o, 1.0));
}

// Quality-ratio constraint tau_edge >= quality * tau_center. Points where
// either region is empty (zero occupancy probability) leave the per-user
// throughput undefined and are excluded from the feasible set.
bool meets_quality_ratio(const GridEvaluation& e, double quality) {
  if (!e.tau_center || !e.tau_edge) return false;
  return *e.tau_edge >= quality * *e.tau_center * (1.0 - kQualityRelTol);
}

double quality_ratio_violation(const GridEvaluation& e, double quality) {
  if (!e.tau_center || !e.tau_edge) return 2.0;
  double need = quality * *e.tau_center;
  return std::max(0.0, (need - *e.tau_edge) / std::max(need, 1.0));
}

// Deterministic preference order: higher cell throughput, then higher
// achieved 5th-percentile rate, then smaller omega, then smaller zeta.
bool better(const GridEvaluation& a, const GridEvaluation& b) {
  if (a.eta_total != b.eta_total) return a.eta_total > b.eta_total;
  double ar = a.r5_defined ? a.r5 : 0.0;
  double br = b.r5_defined ? b.r5 : 0.0;
  if (ar != br) return ar > br;
  if (a.omega != b.omega) return a.omega < b.omega;
  return a.zeta < b.zeta;
}

// Preference order when nothing is feasible: come as close as possible to
// the rate floor, then fall back to the regular order.
bool closer_to_rate_floor(const GridEvaluation& a, const GridEvaluation& b) {
  double ar = a.r5_defined ? a.r5 : 0.0;
  double br = b.r5_defined ? b.r5 : 0.0;
  if (ar != br) return ar > br;
  return better(a, b);
}

void fill_solution(DesignSolution& s, const GridEvaluation& e) {
  s.omega = e.omega;
  s.zeta = e.zeta;
  s.eta_total = e.eta_total;
  s.eta_center = e.eta_center;
  s.eta_edge = e.eta_edge;
  s.achieved_r5 = e.r5_defined ? e.r5 : 0.0;
  s.tau_center = e.tau_center;
  s.tau_edge = e.tau_edge;
}

std::vector<double> build_omega_grid(const CellGeometry& geom, double step) {
  double lo = geom.min_dist / geom.circ_radius;
  std::vector<double> grid;
  for (std::size_t j = 0;; ++j) {
    double w = lo + step * static_cast<double>(j);
    if (w >= 1.0 - 1e-12) break;
    grid.push_back(w);
  }
  grid.push_back(1.0);
  return grid;
}

std::vector<double> build_zeta_grid(const DesignProblem& p) {
  if (const auto* fx = std::get_if<FxD>(&p.design)) return {fx->zeta_o};
  if (p.scheme == Scheme::ffr) return valid_rho_set(p.profile.num_rbs);
  std::vector<double> grid;
  for (std::size_t j = 0;; ++j) {
    double b = p.grids.beta_step * static_cast<double>(j);
    if (b >= 1.0 - 1e-12) break;
    grid.push_back(b);
  }
  grid.push_back(1.0);
  return grid;
}

// Golden-section refinement of the SFR power factor around a grid winner.
// Infeasible probes are penalized rather than rejected so the bracket keeps
// shrinking; the winner is replaced only by a strictly preferable feasible
// probe. Probe models are built detached so the shared master-table cache
// stays bounded by the grid.
template <typename Feasible, typename Violation>
GridEvaluation polish_beta(const DesignSpace& space, const GridEvaluation& start,
                           Feasible&& feasible, Violation&& violation) {
  const DesignGrids& grids = space.problem().grids;
  double lo = std::max(0.0, start.zeta - grids.beta_step);
  double hi = std::min(1.0, start.zeta + grids.beta_step);
  if (!(hi > lo)) return start;
  std::vector<GridEvaluation> probes;
  golden_section_max(
      [&](double beta) {
        GridEvaluation e = space.evaluate_detached(start.omega, beta);
        probes.push_back(e);
        return feasible(e) ? e.eta_total
                           : kInfeasibleScore * (1.0 + violation(e));
      },
      lo, hi, grids.beta_polish_tol);
  GridEvaluation winner = start;
  for (const GridEvaluation& e : probes)
    if (feasible(e) && better(e, winner)) winner = e;
  return winner;
}

template <typename Feasible, typename Violation>
DesignSolution solve_constrained(const DesignSpace& space, Feasible&& feasible,
                                 Violation&& violation) {
  const std::vector<GridEvaluation>& evals = space.evaluations();
  const GridEvaluation* best = nullptr;
  for (const GridEvaluation& e : evals)
    if (feasible(e) && (!best || better(e, *best))) best = &e;

  DesignSolution sol;
  sol.trace = evals;
  if (!best) {
    const GridEvaluation* closest = &evals.front();
    for (const GridEvaluation& e : evals)
      if (closer_to_rate_floor(e, *closest)) closest = &e;
    fill_solution(sol, *closest);
    sol.feasible = false;
    return sol;
  }

  GridEvaluation winner = *best;
  if (space.problem().scheme == Scheme::sfr &&
      !std::holds_alternative<FxD>(space.problem().design)) {
    winner = polish_beta(space, winner, feasible, violation);
  }
  fill_solution(sol, winner);
  sol.feasible = true;
  return sol;
}

}  // namespace

bool evaluation_meets_rate_floor(const GridEvaluation& e, double v_o) {
  return meets_rate_floor(e, v_o);
}

bool evaluation_meets_quality(const GridEvaluation& e, double quality) {
  return meets_quality_ratio(e, quality);
}

bool evaluation_preferred(const GridEvaluation& a, const GridEvaluation& b) {
  return better(a, b);
}

void DesignProblem::validate() const {
  profile.validate();
  if (!(geom.circ_radius > 0.0) || !(geom.min_dist > 0.0) ||
      !(geom.min_dist < geom.circ_radius) || !(geom.hex_side > 0.0)) {
    throw ConfigError("cell geometry radii must satisfy 0 < min_dist < circ_radius");
  }
  if (!(grids.omega_step > 0.0) || !(grids.beta_step > 0.0) ||
      !(grids.beta_polish_tol > 0.0) || !(grids.omega_polish_tol > 0.0)) {
    throw ConfigError("design grid steps and tolerances must be positive");
  }
  if (threads < 0) throw ConfigError("threads must be non-negative");
  if (const auto* r = std::get_if<R5pD>(&design)) {
    if (!std::isfinite(r->v_o) || r->v_o < 0.0)
      throw ConfigError("rate floor v_o must be finite and non-negative");
  } else if (const auto* fx = std::get_if<FxD>(&design)) {
    make_partition(profile, scheme, fx->zeta_o);  // validates the fixed split
  } else if (const auto* q = std::get_if<QoScD>(&design)) {
    if (!std::isfinite(q->quality) || q->quality < 0.0 || q->quality > 1.0)
      throw ConfigError("quality ratio must lie in [0, 1]");
  }
}

DesignSpace::DesignSpace(const DesignProblem& problem)
    : prob_(problem), layout_(build_layout(problem.geom.hex_side, 2)) {
  prob_.validate();
  omegas_ = build_omega_grid(prob_.geom, prob_.grids.omega_step);
  zetas_ = build_zeta_grid(prob_);
  evals_.resize(omegas_.size() * zetas_.size());
  unsigned threads = prob_.threads > 0 ? static_cast<unsigned>(prob_.threads) : 0;
  for (std::size_t zi = 0; zi < zetas_.size(); ++zi) {
    // A mid-split point requests every master table this zeta can need
    // (degenerate regions never request one), so the omega sweep below only
    // reads the cache and is safe to run on several workers.
    (void)evaluate(0.5 * (omegas_.front() + 1.0), zetas_[zi]);
    parallel_for(omegas_.size(), threads, [&](std::size_t wi) {
      evals_[zi * omegas_.size() + wi] = eval_with(omegas_[wi], zetas_[zi], &cache_);
    });
  }
}

GridEvaluation DesignSpace::evaluate(double omega, double zeta) const {
  return eval_with(omega, zeta, &cache_);
}

GridEvaluation DesignSpace::evaluate_detached(double omega, double zeta) const {
  return eval_with(omega, zeta, nullptr);
}

GridEvaluation DesignSpace::eval_with(double omega, double zeta,
                                      MasterTableCache* cache) const {
  CellThroughputModel model(prob_.profile, prob_.geom, layout_, prob_.scheme,
                            omega, zeta, prob_.model, cache);
  GridEvaluation e;
  e.omega = omega;
  e.zeta = zeta;
  e.eta_center = model.region(Region::center).avg_throughput();
  e.eta_edge = model.region(Region::edge).avg_throughput();
  e.eta_total = e.eta_center + e.eta_edge;
  double mass = model.total_cdf_mass();
  e.r5_defined = mass >= 0.05;
  if (e.r5_defined) e.r5 = model.percentile(0.05);
  e.tau_center = model.per_user_region_throughput(Region::center);
  e.tau_edge = model.per_user_region_throughput(Region::edge);
  return e;
}

DesignSolution solve_r5pd(const DesignSpace& space, double v_o) {
  if (!std::isfinite(v_o) || v_o < 0.0)
    throw ConfigError("rate floor v_o must be finite and non-negative");
  return solve_constrained(
      space, [&](const GridEvaluation& e) { return meets_rate_floor(e, v_o); },
      [&](const GridEvaluation& e) { return rate_floor_violation(e, v_o); });
}

DesignSolution solve_fxd(const DesignSpace& space) {
  const auto* fx = std::get_if<FxD>(&space.problem().design);
  if (!fx) throw ConfigError("design space was not built with a fixed split");
  const std::vector<GridEvaluation>& evals = space.evaluations();
  const GridEvaluation* best = &evals.front();
  for (const GridEvaluation& e : evals)
    if (better(e, *best)) best = &e;

  // Refine omega by golden section around the grid winner; the fixed split
  // shares its master tables with the grid, so probes stay cached.
  const DesignGrids& grids = space.problem().grids;
  double lo = std::max(space.omega_grid().front(), best->omega - grids.omega_step);
  double hi = std::min(1.0, best->omega + grids.omega_step);
  std::vector<GridEvaluation> probes;
  golden_section_max(
      [&](double omega) {
        GridEvaluation e = space.evaluate(omega, fx->zeta_o);
        probes.push_back(e);
        return e.eta_total;
      },
      lo, hi, grids.omega_polish_tol);
  GridEvaluation winner = *best;
  for (const GridEvaluation& e : probes)
    if (better(e, winner)) winner = e;

  DesignSolution sol;
  sol.trace = evals;
  fill_solution(sol, winner);
  sol.feasible = true;
  return sol;
}

DesignSolution solve_qoscd(const DesignSpace& space, double quality) {
  if (!std::isfinite(quality) || quality < 0.0 || quality > 1.0)
    throw ConfigError("quality ratio must lie in [0, 1]");
  return solve_constrained(
      space,
      [&](const GridEvaluation& e) { return meets_quality_ratio(e, quality); },
      [&](const GridEvaluation& e) { return quality_ratio_violation(e, quality); });
}

DesignSolution solve_r5pd(const DesignProblem& problem) {
  const auto* d = std::get_if<R5pD>(&problem.design);
  if (!d) throw ConfigError("problem does not carry a rate-floor design");
  DesignSpace space(problem);
  return solve_r5pd(space, d->v_o);
}

DesignSolution solve_fxd(const DesignProblem& problem) {
  if (!std::holds_alternative<FxD>(problem.design))
    throw ConfigError("problem does not carry a fixed-split design");
  DesignSpace space(problem);
  return solve_fxd(space);
}

DesignSolution solve_qoscd(const DesignProblem& problem) {
  const auto* d = std::get_if<QoScD>(&problem.design);
  if (!d) throw ConfigError("problem does not carry a quality-ratio design");
  DesignSpace space(problem);
  return solve_qoscd(space, d->quality);
}

std::vector<ParetoPoint> pareto_front(const DesignSpace& space,
                                      const std::vector<double>& v_o_grid) {
  if (v_o_grid.empty()) throw ConfigError("target-rate grid must not be empty");
  std::vector<ParetoPoint> front;
  front.reserve(v_o_grid.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (double v_o : v_o_grid) {
    if (!std::isfinite(v_o) || v_o < 0.0)
      throw ConfigError("target rates must be finite and non-negative");
    if (v_o < prev) throw ConfigError("target-rate grid must be ascending");
    prev = v_o;
    DesignSolution sol = solve_r5pd(space, v_o);
    front.push_back({v_o, sol.feasible, sol.achieved_r5, sol.eta_total,
                     sol.omega, sol.zeta});
  }
  return front;
}

}  // namespace frplan
