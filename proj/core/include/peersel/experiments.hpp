#pragma once

#include <iosfwd>
#include <string>

#include "peersel/mechanisms.hpp"
#include "peersel/metrics.hpp"

namespace peersel {

/// One sweep cell: everything a trial needs except its seed.
struct CellParams {
  int n = 0;
  int k = 0;
  int m = 0;
  int ell = 0;
  Rat phi;
};

/// Cartesian sweep over k, m, ell and phi at fixed n.
struct SweepGrid {
  int n = 130;
  int trials = 1;
  std::vector<int> ks;
  std::vector<int> ms;
  std::vector<int> ells;
  std::vector<Rat> phis;
  std::uint64_t master_seed = 0;

  std::vector<CellParams> cells() const;
};

/// One mechanism's metrics for one trial.
struct MechanismResult {
  Mechanism mechanism;
  Rat overlap_vanilla;
  Rat overlap_ground_truth;
  bool abstained = false;
};

struct ExperimentRecord {
  CellParams params;
  int trial = 0;
  std::vector<MechanismResult> results;  // in kAllMechanisms order
};

/// Trial seed as a pure function of the grid seed and cell coordinates, so
/// results do not depend on execution order or parallelism.
std::uint64_t trial_seed(std::uint64_t master_seed, const CellParams& params, int trial);

/// Runs every mechanism on one generated instance. Randomized mechanisms
/// get sub-seeds derived from the trial seed and their names.
ExperimentRecord run_trial(const CellParams& params, Seed seed);

struct CellSummary {
  CellParams params;
  Mechanism mechanism;
  std::string metric;  // "v" or "gt"
  SummaryStats stats;
};

struct SweepResult {
  std::vector<ExperimentRecord> records;
  std::vector<CellSummary> summaries;
  std::vector<CellParams> skipped;  // infeasible cells
};

/// Runs the whole grid. `threads` > 1 distributes trials; the output is
/// identical either way.
SweepResult run_sweep(const SweepGrid& grid, int threads = 1);

/// CSV emission. Columns are part of the external contract:
///   records: n,k,m,ell,phi,trial,mechanism,overlap_v,overlap_gt,abstained
///   summary: n,k,m,ell,phi,mechanism,metric,mean,std,min,max,count
/// Decimals carry 6 fractional digits, ties rounded to even.
void write_records_csv(std::ostream& out, const SweepResult& result);
void write_summary_csv(std::ostream& out, const SweepResult& result);

}  // namespace peersel
