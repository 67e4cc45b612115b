#pragma once

#include <string>
#include <vector>

#include "nullwave/diagnostics.hpp"
#include "nullwave/model.hpp"

// Scenario execution: drives a solver, samples weighted series at a fixed
// cadence, and writes deterministic CSV/JSON artifacts.  Sample assembly
// is strictly serial and lattice updates have disjoint writes, so output
// bytes do not depend on the worker count.

namespace nullwave {

struct RunOptions {
  int workers = 1;
  unsigned long seed = 0;          // recorded in the manifest
  double t_max_override = 0.0;     // > 0 replaces grid.t_max
  double resolution_scale = 1.0;   // divides dr / dx
  std::string out_dir;             // empty = keep everything in memory
};

struct RunResult {
  Scenario scenario;               // after overrides
  bool blew_up = false;
  double lifespan = 0.0;           // blow-up time, or the simulated horizon
  double max_amp = 0.0;            // sup over sampled instants (and blow-up)
  double wall_ms = 0.0;

  std::vector<double> t;           // sample instants
  std::vector<std::string> series_names;
  std::vector<std::vector<double>> series;   // series[k][sample]

  std::vector<std::string> probe_names;
  std::vector<std::vector<double>> probe_series;

  // outgoing-ray samples of component 1 (radial runs only)
  std::vector<std::vector<RaySample>> rays;

  std::string manifest_json;
  std::vector<std::string> files_written;

  const std::vector<double>* find_series(const std::string& name) const;
};

RunResult run_scenario(const Scenario& s, const RunOptions& opt);

// One run per epsilon; worker-parallel across entries, assembled in list
// order.  Entries that blow up report the blow-up time as the lifespan.
LifespanSweep sweep_lifespan(const Scenario& templ, const std::vector<double>& eps_list,
                             const RunOptions& opt);

// Minimal line plot, written beside the CSVs when an output directory is
// set.  Values are plotted on a log10 axis when all positive.
std::string svg_line_plot(const std::vector<double>& x,
                          const std::vector<std::vector<double>>& ys,
                          const std::vector<std::string>& labels, const std::string& title);

}  // namespace nullwave
