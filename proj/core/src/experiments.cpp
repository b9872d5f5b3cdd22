#include "frplan/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "frplan/errors.hpp"
#include "frplan/stats.hpp"
#include "frplan/table.hpp"

namespace frplan {

namespace {

using nlohmann::json;
using Cell = ResultTable::Cell;

Cell opt_cell(const std::optional<double>& v) {
  if (v) return Cell{*v};
  return Cell{std::string{}};
}

std::string pair_suffix(const RunConfig& cfg) {
  return std::string(scheme_name(cfg.scheme)) + "_" + design_name(cfg.design);
}

ResultTable make_table(const RunConfig& cfg, const char* command,
                       std::vector<ResultTable::Column> columns) {
  ResultTable t(std::move(columns));
  t.add_metadata("command", command);
  t.add_metadata("tool_version", version_string());
  t.add_metadata("config", cfg.fingerprint);
  t.add_metadata("seed", std::to_string(cfg.seed));
  t.add_metadata("scheme", scheme_name(cfg.scheme));
  return t;
}

std::string plot_spec(const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, bool logx,
                      std::vector<std::array<std::string, 4>> series) {
  json spec;
  spec["title"] = title;
  spec["xlabel"] = xlabel;
  spec["ylabel"] = ylabel;
  spec["logx"] = logx;
  spec["series"] = json::array();
  for (const auto& [csv, x, y, label] : series) {
    json s = {{"csv", csv}, {"x", x}, {"y", y}};
    if (!label.empty()) s["label"] = label;
    spec["series"].push_back(s);
  }
  return spec.dump(2) + "\n";
}

DesignSolution solve_configured_design(const RunConfig& cfg) {
  DesignProblem prob = cfg.design_problem();
  DesignSpace space(prob);
  switch (cfg.design) {
    case DesignKind::r5pd: return solve_r5pd(space, cfg.v_o_bps);
    case DesignKind::fxd: return solve_fxd(space);
    default: return solve_qoscd(space, cfg.quality);
  }
}

// Operating point for point commands (cdf, simulate): the explicit config
// point when given, otherwise the configured design's solution.
struct OperatingPoint {
  double omega = 0.0;
  double zeta = 0.0;
  bool from_solver = false;
  bool feasible = true;
};

OperatingPoint resolve_point(const RunConfig& cfg) {
  if (cfg.omega) return {*cfg.omega, *cfg.zeta, false, true};
  DesignSolution sol = solve_configured_design(cfg);
  return {sol.omega, sol.zeta, true, sol.feasible};
}

void add_point_metadata(ResultTable& t, const OperatingPoint& pt) {
  t.add_metadata("omega", format_numeric(pt.omega));
  t.add_metadata("zeta", format_numeric(pt.zeta));
  t.add_metadata("point_origin", pt.from_solver ? "design-solve" : "config");
  if (pt.from_solver) t.add_metadata("design_feasible", pt.feasible ? "1" : "0");
}

const char* region_label(Region a) {
  return a == Region::center ? "center" : "edge";
}

// Generic matplotlib renderer for the emitted *.plot.json specs; kept as a
// standalone script so figures can be regenerated without the tool.
constexpr const char* kRenderScript = R"PY(#!/usr/bin/env python3
"""Render *.plot.json specs (written next to result CSVs) to PNG files."""
import argparse
import csv
import json
import sys
from pathlib import Path


def column_reader(path):
    cols, rows = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.reader(line for line in fh if not line.startswith("#")):
            if not cols:
                cols = rec
            else:
                rows.append(rec)
    names = [c.split("(")[0] for c in cols]

    def col(name):
        idx = names.index(name)
        out = []
        for r in rows:
            try:
                out.append(float(r[idx]))
            except (ValueError, IndexError):
                out.append(float("nan"))
        return out

    return col


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("specs", nargs="*",
                    help="plot spec files (default: *.plot.json in cwd)")
    args = ap.parse_args()
    specs = [Path(s) for s in args.specs] or sorted(Path(".").glob("*.plot.json"))
    if not specs:
        sys.exit("no plot specs found")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    for spec_path in specs:
        spec = json.loads(spec_path.read_text(encoding="utf-8"))
        fig, ax = plt.subplots(figsize=(7.0, 4.5))
        for series in spec["series"]:
            col = column_reader(spec_path.parent / series["csv"])
            ax.plot(col(series["x"]), col(series["y"]),
                    marker=series.get("marker", ""),
                    label=series.get("label"))
        if spec.get("logx"):
            ax.set_xscale("log")
        ax.set_xlabel(spec.get("xlabel", ""))
        ax.set_ylabel(spec.get("ylabel", ""))
        ax.set_title(spec.get("title", ""))
        ax.grid(True, alpha=0.3)
        if any(s.get("label") for s in spec["series"]):
            ax.legend()
        out = spec_path.with_suffix("").with_suffix(".png")
        fig.tight_layout()
        fig.savefig(out, dpi=150)
        plt.close(fig)
        print(f"wrote {out}")


if __name__ == "__main__":
    main()
)PY";

}  // namespace

CommandOutput cmd_optimize(const RunConfig& cfg) {
  DesignSolution sol = solve_configured_design(cfg);

  ResultTable t = make_table(
      cfg, "optimize",
      {{"omega", ""},
       {"zeta", ""},
       {"eta_total", "bps"},
       {"eta_center", "bps"},
       {"eta_edge", "bps"},
       {"r5", "bps"},
       {"tau_center", "bps"},
       {"tau_edge", "bps"},
       {"selected", ""}});
  t.add_metadata("design", design_name(cfg.design));
  t.add_metadata("feasible", sol.feasible ? "1" : "0");
  t.add_metadata("omega_star", format_numeric(sol.omega));
  t.add_metadata("zeta_star", format_numeric(sol.zeta));
  t.add_metadata("eta_star_bps", format_numeric(sol.eta_total));
  t.add_metadata("r5_star_bps", format_numeric(sol.achieved_r5));

  bool winner_in_trace = false;
  for (const GridEvaluation& e : sol.trace) {
    bool selected = sol.feasible && e.omega == sol.omega && e.zeta == sol.zeta;
    winner_in_trace = winner_in_trace || selected;
    t.add_row({e.omega, e.zeta, e.eta_total, e.eta_center, e.eta_edge,
               e.r5_defined ? Cell{e.r5} : Cell{std::string{}},
               opt_cell(e.tau_center), opt_cell(e.tau_edge),
               std::int64_t{selected ? 1 : 0}});
  }
  if (sol.feasible && !winner_in_trace) {
    // polished winner sits off the search grid: append it explicitly
    t.add_row({sol.omega, sol.zeta, sol.eta_total, sol.eta_center, sol.eta_edge,
               sol.achieved_r5, opt_cell(sol.tau_center), opt_cell(sol.tau_edge),
               std::int64_t{1}});
  }

  std::string base = "optimize_" + pair_suffix(cfg);
  CommandOutput out;
  out.exit_code = sol.feasible ? 0 : 4;
  out.summary = std::string("feasible=") + (sol.feasible ? "1" : "0") +
                " omega_star=" + format_numeric(sol.omega) +
                " zeta_star=" + format_numeric(sol.zeta) +
                " eta_star_bps=" + format_numeric(sol.eta_total) +
                " r5_star_bps=" + format_numeric(sol.achieved_r5) + "\n";
  out.files.emplace_back(base + ".csv", t.to_csv());
  out.files.emplace_back(
      base + ".plot.json",
      plot_spec("Design search trace (" + pair_suffix(cfg) + ")",
                "distance threshold ratio", "average cell throughput (bps)",
                false, {{base + ".csv", "omega", "eta_total", ""}}));
  return out;
}

CommandOutput cmd_cdf(const RunConfig& cfg) {
  OperatingPoint pt = resolve_point(cfg);
  BsLayout layout = build_layout(cfg.geom.hex_side, 2);
  CellThroughputModel model(cfg.profile, cfg.geom, layout, cfg.scheme, pt.omega,
                            pt.zeta, cfg.model_options());
  ThroughputCdf curve = model.sampled_cdf();
  double mass = model.total_cdf_mass();

  std::optional<SimSummary> sim;
  if (cfg.with_sim) {
    SimConfig sc = cfg.sim_config(pt.omega, pt.zeta);
    sc.validate();
    std::vector<DropResult> drops = simulate(sc);
    sim = aggregate(drops);
  }

  std::vector<ResultTable::Column> cols = {
      {"v", "bps"}, {"F", ""}, {"F_conditional", ""}};
  if (sim) cols.push_back({"F_empirical", ""});

  auto fill_cdf_rows = [&](ResultTable& t, const std::vector<double>& vs) {
    for (double v : vs) {
      double f = model.user_cdf(v);
      std::vector<Cell> row = {v, f, f / mass};
      if (sim) row.push_back(sim->ecdf(v));
      t.add_row(std::move(row));
    }
  };

  ResultTable t = make_table(cfg, "cdf", cols);
  t.add_metadata("design", design_name(cfg.design));
  add_point_metadata(t, pt);
  t.add_metadata("cdf_mass", format_numeric(mass));
  if (curve.plateau) {
    t.add_metadata("plateau_level", format_numeric(curve.plateau->level));
    t.add_metadata("plateau_v_lo_bps", format_numeric(curve.plateau->v_lo));
    t.add_metadata("plateau_v_hi_bps", format_numeric(curve.plateau->v_hi));
  }
  std::vector<double> vs = {0.0};
  vs.insert(vs.end(), curve.v.begin(), curve.v.end());
  fill_cdf_rows(t, vs);

  std::string sfx = pair_suffix(cfg);
  CommandOutput out;
  out.exit_code = pt.feasible ? 0 : 4;
  out.files.emplace_back("cdf_" + sfx + ".csv", t.to_csv());

  // fine sampling of the lower tail around the 5% level
  if (mass >= 0.05) {
    double v_lo = model.percentile(0.01);
    double v_hi = model.percentile(std::min(0.15, 0.9 * mass));
    ResultTable zoom = make_table(cfg, "cdf", cols);
    zoom.add_metadata("design", design_name(cfg.design));
    zoom.add_metadata("detail", "lower-tail zoom around F=0.05");
    std::vector<double> zvs;
    int n = std::max(2, cfg.cdf_points / 2);
    for (int i = 0; i < n; ++i)
      zvs.push_back(v_lo + (v_hi - v_lo) * i / (n - 1.0));
    fill_cdf_rows(zoom, zvs);
    out.files.emplace_back("cdf_zoom_" + sfx + ".csv", zoom.to_csv());
  }

  out.summary = "omega=" + format_numeric(pt.omega) +
                " zeta=" + format_numeric(pt.zeta);
  if (curve.plateau) {
    out.summary += " plateau_level=" + format_numeric(curve.plateau->level);
  } else {
    out.summary += " plateau_level=none";
  }
  if (sim) {
    double sup = ks_distance(sim->pooled_rates_bps, [&](double v) {
      return model.user_cdf(v) / mass;
    });
    out.summary += " sup_distance=" + format_numeric(sup);
  }
  out.summary += "\n";

  std::vector<std::array<std::string, 4>> series = {
      {"cdf_" + sfx + ".csv", "v", "F_conditional", "analytic"}};
  if (sim)
    series.push_back({"cdf_" + sfx + ".csv", "v", "F_empirical", "simulated"});
  out.files.emplace_back("cdf_" + sfx + ".plot.json",
                         plot_spec("User throughput CDF (" + sfx + ")",
                                   "average user throughput (bps)", "CDF", true,
                                   std::move(series)));
  return out;
}

CommandOutput cmd_sweep_omega(const RunConfig& cfg) {
  DesignProblem prob = cfg.design_problem();
  DesignSpace space(prob);

  ResultTable t = make_table(cfg, "sweep-omega",
                             {{"omega", ""},
                              {"zeta_best", ""},
                              {"eta_total", "bps"},
                              {"eta_center", "bps"},
                              {"eta_edge", "bps"},
                              {"r5", "bps"},
                              {"tau_center", "bps"},
                              {"tau_edge", "bps"},
                              {"feasible", ""}});
  t.add_metadata("design", design_name(cfg.design));
  switch (cfg.design) {
    case DesignKind::r5pd:
      t.add_metadata("v_o_bps", format_numeric(cfg.v_o_bps));
      break;
    case DesignKind::fxd:
      t.add_metadata("zeta_o", format_numeric(cfg.zeta_o));
      break;
    case DesignKind::qoscd:
      t.add_metadata("quality", format_numeric(cfg.quality));
      break;
  }

  auto meets = [&](const GridEvaluation& e) {
    switch (cfg.design) {
      case DesignKind::r5pd: return evaluation_meets_rate_floor(e, cfg.v_o_bps);
      case DesignKind::fxd: return true;
      default: return evaluation_meets_quality(e, cfg.quality);
    }
  };

  for (double omega : space.omega_grid()) {
    const GridEvaluation* best = nullptr;
    const GridEvaluation* fallback = nullptr;
    for (const GridEvaluation& e : space.evaluations()) {
      if (e.omega != omega) continue;
      if (!fallback || evaluation_preferred(e, *fallback)) fallback = &e;
      if (meets(e) && (!best || evaluation_preferred(e, *best))) best = &e;
    }
    const GridEvaluation& e = best ? *best : *fallback;
    t.add_row({e.omega, e.zeta, e.eta_total, e.eta_center, e.eta_edge,
               e.r5_defined ? Cell{e.r5} : Cell{std::string{}},
               opt_cell(e.tau_center), opt_cell(e.tau_edge),
               std::int64_t{best ? 1 : 0}});
  }

  std::string base = "sweep_omega_" + pair_suffix(cfg);
  CommandOutput out;
  out.files.emplace_back(base + ".csv", t.to_csv());
  out.files.emplace_back(
      base + ".plot.json",
      plot_spec("Cell throughput vs distance threshold (" + pair_suffix(cfg) + ")",
                "distance threshold ratio", "average cell throughput (bps)",
                false, {{base + ".csv", "omega", "eta_total", ""}}));
  out.summary = "rows=" + std::to_string(space.omega_grid().size()) + "\n";
  return out;
}

CommandOutput cmd_pareto(const RunConfig& cfg) {
  DesignProblem prob = cfg.design_problem();
  prob.design = R5pD{};  // the front is traced over rate floors by definition
  DesignSpace space(prob);
  std::vector<double> grid = cfg.v_o_grid_bps;
  std::sort(grid.begin(), grid.end());
  std::vector<ParetoPoint> front = pareto_front(space, grid);

  ResultTable t = make_table(cfg, "pareto",
                             {{"v_o", "bps"},
                              {"feasible", ""},
                              {"r5", "bps"},
                              {"eta_total", "bps"},
                              {"omega", ""},
                              {"zeta", ""}});
  // FFR splits come from a finite set, so its front repeats grid points
  t.add_metadata("front_discrete", cfg.scheme == Scheme::ffr ? "1" : "0");
  for (const ParetoPoint& q : front)
    t.add_row({q.v_o, std::int64_t{q.feasible ? 1 : 0}, q.achieved_r5,
               q.eta_total, q.omega, q.zeta});

  std::string base = std::string("pareto_") + scheme_name(cfg.scheme);
  CommandOutput out;
  out.files.emplace_back(base + ".csv", t.to_csv());
  out.files.emplace_back(
      base + ".plot.json",
      plot_spec("Throughput vs 5th-percentile rate (" +
                    std::string(scheme_name(cfg.scheme)) + ")",
                "5th-percentile user rate (bps)",
                "average cell throughput (bps)", false,
                {{base + ".csv", "r5", "eta_total", ""}}));
  std::size_t feasible =
      static_cast<std::size_t>(std::count_if(front.begin(), front.end(),
                                             [](const ParetoPoint& q) { return q.feasible; }));
  out.summary = "points=" + std::to_string(front.size()) +
                " feasible=" + std::to_string(feasible) + "\n";
  return out;
}

CommandOutput cmd_load_sweep(const RunConfig& cfg) {
  ResultTable t = make_table(cfg, "load-sweep",
                             {{"mean_users", ""},
                              {"feasible", ""},
                              {"eta_total", "bps"},
                              {"r5", "bps"},
                              {"omega", ""},
                              {"zeta", ""}});
  t.add_metadata("v_o_bps", format_numeric(cfg.v_o_bps));

  std::vector<double> loads = cfg.mean_users_grid;
  std::sort(loads.begin(), loads.end());
  double area = std::numbers::pi * (cfg.geom.circ_radius * cfg.geom.circ_radius -
                                    cfg.geom.min_dist * cfg.geom.min_dist);
  for (double m : loads) {
    DesignProblem prob = cfg.design_problem();
    prob.design = R5pD{cfg.v_o_bps};
    prob.profile.user_density = m / area;
    DesignSpace space(prob);
    DesignSolution sol = solve_r5pd(space, cfg.v_o_bps);
    t.add_row({m, std::int64_t{sol.feasible ? 1 : 0}, sol.eta_total,
               sol.achieved_r5, sol.omega, sol.zeta});
  }

  std::string base = std::string("load_sweep_") + scheme_name(cfg.scheme);
  CommandOutput out;
  out.files.emplace_back(base + ".csv", t.to_csv());
  out.files.emplace_back(
      base + ".plot.json",
      plot_spec("Cell throughput vs user load (" +
                    std::string(scheme_name(cfg.scheme)) + ")",
                "mean users per cell", "average cell throughput (bps)", true,
                {{base + ".csv", "mean_users", "eta_total", ""}}));
  out.summary = "points=" + std::to_string(loads.size()) + "\n";
  return out;
}

CommandOutput cmd_jain(const RunConfig& cfg) {
  DesignProblem prob = cfg.design_problem();
  prob.design = R5pD{};
  DesignSpace space(prob);
  std::vector<double> grid = cfg.v_o_grid_bps;
  std::sort(grid.begin(), grid.end());

  ResultTable t = make_table(cfg, "jain",
                             {{"v_o", "bps"},
                              {"feasible", ""},
                              {"jain", ""},
                              {"eta_total", "bps"},
                              {"r5", "bps"},
                              {"omega", ""},
                              {"zeta", ""}});
  BsLayout layout = build_layout(cfg.geom.hex_side, 2);
  MasterTableCache cache;
  for (double v_o : grid) {
    DesignSolution sol = solve_r5pd(space, v_o);
    CellThroughputModel model(cfg.profile, cfg.geom, layout, cfg.scheme,
                              sol.omega, sol.zeta, cfg.model_options(), &cache);
    t.add_row({v_o, std::int64_t{sol.feasible ? 1 : 0}, model.jain_index(),
               sol.eta_total, sol.achieved_r5, sol.omega, sol.zeta});
  }

  std::string base = std::string("jain_") + scheme_name(cfg.scheme);
  CommandOutput out;
  out.files.emplace_back(base + ".csv", t.to_csv());
  out.files.emplace_back(
      base + ".plot.json",
      plot_spec("Fairness vs rate floor (" +
                    std::string(scheme_name(cfg.scheme)) + ")",
                "rate floor (bps)", "Jain fairness index", false,
                {{base + ".csv", "v_o", "jain", ""}}));
  out.summary = "points=" + std::to_string(grid.size()) + "\n";
  return out;
}

CommandOutput cmd_simulate(const RunConfig& cfg) {
  OperatingPoint pt = resolve_point(cfg);
  SimConfig sc = cfg.sim_config(pt.omega, pt.zeta);
  sc.validate();
  std::vector<DropResult> drops = simulate(sc);
  SimSummary summary = aggregate(drops);

  ResultTable per_drop = make_table(cfg, "simulate",
                                    {{"drop", ""},
                                     {"users", ""},
                                     {"cell_throughput", "bps"},
                                     {"counted_slots", ""}});
  add_point_metadata(per_drop, pt);
  per_drop.add_metadata("slots", std::to_string(sc.slots));
  per_drop.add_metadata("drops", std::to_string(sc.drops));
  per_drop.add_metadata("window", std::to_string(sc.window));
  per_drop.add_metadata("warmup", std::to_string(sc.resolved_warmup()));
  per_drop.add_metadata("mean_cell_throughput_bps",
                        format_numeric(summary.mean_cell_throughput_bps));
  per_drop.add_metadata("r5_bps", format_numeric(summary.r5_bps));
  per_drop.add_metadata("jain", format_numeric(summary.jain));
  per_drop.add_metadata("total_users", std::to_string(summary.total_users));
  per_drop.add_metadata("empty_drops", std::to_string(summary.empty_drops));
  for (std::size_t i = 0; i < drops.size(); ++i)
    per_drop.add_row({static_cast<std::int64_t>(i),
                      static_cast<std::int64_t>(drops[i].users.size()),
                      drops[i].cell_throughput_bps,
                      static_cast<std::int64_t>(drops[i].counted_slots)});

  ResultTable users = make_table(cfg, "simulate",
                                 {{"drop", ""},
                                  {"d", "m"},
                                  {"theta", "rad"},
                                  {"region", ""},
                                  {"mean_rate", "bps"},
                                  {"slots_scheduled", ""}});
  add_point_metadata(users, pt);
  for (std::size_t i = 0; i < drops.size(); ++i)
    for (const SimUser& u : drops[i].users)
      users.add_row({static_cast<std::int64_t>(i), u.d, u.theta,
                     std::string(region_label(u.region)), u.mean_rate_bps,
                     u.slots_scheduled});

  // empirical user-rate CDF, downsampled to the configured grid size
  ResultTable ecdf_t = make_table(cfg, "simulate", {{"v", "bps"}, {"F_empirical", ""}});
  add_point_metadata(ecdf_t, pt);
  const std::vector<double>& pooled = summary.pooled_rates_bps;
  std::size_t n_points =
      std::min<std::size_t>(pooled.size(), static_cast<std::size_t>(cfg.cdf_points));
  for (std::size_t j = 0; j < n_points; ++j) {
    std::size_t idx = (pooled.size() - 1) * j / (n_points > 1 ? n_points - 1 : 1);
    double v = pooled[idx];
    ecdf_t.add_row({v, summary.ecdf(v)});
  }

  std::string sname = scheme_name(cfg.scheme);
  CommandOutput out;
  out.exit_code = pt.feasible ? 0 : 4;
  out.files.emplace_back("simulate_" + sname + ".csv", per_drop.to_csv());
  out.files.emplace_back("simulate_users_" + sname + ".csv", users.to_csv());
  out.files.emplace_back("simulate_cdf_" + sname + ".csv", ecdf_t.to_csv());
  out.files.emplace_back(
      "simulate_cdf_" + sname + ".plot.json",
      plot_spec("Simulated user throughput CDF (" + sname + ")",
                "average user throughput (bps)", "CDF", true,
                {{"simulate_cdf_" + sname + ".csv", "v", "F_empirical", ""}}));
  out.summary = "omega=" + format_numeric(pt.omega) +
                " zeta=" + format_numeric(pt.zeta) +
                " mean_cell_throughput_bps=" +
                format_numeric(summary.mean_cell_throughput_bps) +
                " r5_bps=" + format_numeric(summary.r5_bps) +
                " jain=" + format_numeric(summary.jain) + "\n";
  return out;
}

void write_outputs(const CommandOutput& out, const std::string& out_dir) {
  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + out_dir);
  auto write_file = [&](const std::string& name, const std::string& bytes) {
    std::ofstream fh(dir / name, std::ios::binary);
    if (!fh) throw ConfigError("cannot open output file: " + (dir / name).string());
    fh.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!fh) throw ConfigError("failed writing output file: " + (dir / name).string());
  };
  for (const auto& [name, bytes] : out.files) write_file(name, bytes);
  write_file("render_plots.py", kRenderScript);
}

}  // namespace frplan
