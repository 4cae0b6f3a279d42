#include "peersel/experiments.hpp"

#include <algorithm>
#include <future>
#include <ostream>
#include <stdexcept>

namespace peersel {

std::vector<CellParams> SweepGrid::cells() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (ks.empty() || ms.empty() || ells.empty() || phis.empty()) {
    throw std::invalid_argument("every sweep list needs at least one value");
  }
  std::vector<CellParams> out;
  for (int k : ks) {
    for (int m : ms) {
      for (int ell : ells) {
        for (const Rat& phi : phis) {
          out.push_back({n, k, m, ell, phi});
        }
      }
    }
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t master_seed, const CellParams& params, int trial) {
  std::uint64_t seed = master_seed;
  seed = seed_combine(seed, static_cast<std::uint64_t>(params.n));
  seed = seed_combine(seed, static_cast<std::uint64_t>(params.k));
  seed = seed_combine(seed, static_cast<std::uint64_t>(params.m));
  seed = seed_combine(seed, static_cast<std::uint64_t>(params.ell));
  seed = seed_combine(seed, format_fraction(params.phi));
  seed = seed_combine(seed, static_cast<std::uint64_t>(trial));
  return seed;
}

ExperimentRecord run_trial(const CellParams& params, Seed seed) {
  Instance instance = generate_instance(params.n, params.m, params.ell, MallowsParams{params.phi},
                                        Seed{seed_combine(seed.value, "instance")});
  auto truth_top = ground_truth_topk(instance.ground_truth, params.k);
  auto vanilla_winners = vanilla(instance.profile, params.k).winners;

  ExperimentRecord record;
  record.params = params;
  for (Mechanism mechanism : kAllMechanisms) {
    Seed sub{seed_combine(seed.value, mechanism_name(mechanism))};
    SelectionOutcome outcome = run_mechanism(mechanism, instance.profile, instance.clustering,
                                             instance.assignment, params.k, sub);
    MechanismResult result;
    result.mechanism = mechanism;
    result.overlap_vanilla = overlap(outcome.winners, vanilla_winners, params.k).value;
    result.overlap_ground_truth = overlap(outcome.winners, truth_top, params.k).value;
    result.abstained = outcome.winners.empty() && params.k > 0;
    record.results.push_back(std::move(result));
  }
  return record;
}

namespace {

bool cell_feasible(const CellParams& params) {
  if (params.n <= 0 || params.ell < 2 || params.ell > params.n) return false;
  if (params.k < 1 || params.k > params.n) return false;
  if (params.m < 1 || params.phi < 0 || params.phi > 1) return false;
  // Cluster sizes only depend on (n, ell), so one probe assignment settles
  // feasibility for the whole cell.
  try {
    auto clustering = make_clustering(params.n, params.ell, Seed{0});
    balanced_assignment(clustering, params.m, Seed{0});
  } catch (const std::invalid_argument&) {
    return false;
  }
  return true;
}

}  // namespace

SweepResult run_sweep(const SweepGrid& grid, int threads) {
  SweepResult result;
  auto cells = grid.cells();

  for (const auto& params : cells) {
    if (!cell_feasible(params)) {
      result.skipped.push_back(params);
      continue;
    }
    std::size_t first = result.records.size();
    result.records.resize(first + grid.trials);
    auto run_range = [&](int begin, int end) {
      for (int trial = begin; trial < end; ++trial) {
        result.records[first + trial] =
            run_trial(params, Seed{trial_seed(grid.master_seed, params, trial)});
        result.records[first + trial].trial = trial;
      }
    };
    if (threads <= 1 || grid.trials == 1) {
      run_range(0, grid.trials);
    } else {
      const int workers = std::min(threads, grid.trials);
      std::vector<std::future<void>> futures;
      for (int w = 0; w < workers; ++w) {
        const int begin = static_cast<int>(static_cast<long>(grid.trials) * w / workers);
        const int end = static_cast<int>(static_cast<long>(grid.trials) * (w + 1) / workers);
        futures.push_back(std::async(std::launch::async, run_range, begin, end));
      }
      for (auto& future : futures) future.get();
    }

    // Per-cell summaries, in mechanism then metric order.
    for (Mechanism mechanism : kAllMechanisms) {
      std::vector<Rat> v_samples, gt_samples;
      for (std::size_t i = first; i < result.records.size(); ++i) {
        for (const auto& mech_result : result.records[i].results) {
          if (mech_result.mechanism != mechanism) continue;
          v_samples.push_back(mech_result.overlap_vanilla);
          gt_samples.push_back(mech_result.overlap_ground_truth);
        }
      }
      result.summaries.push_back({params, mechanism, "v", summarize(v_samples)});
      result.summaries.push_back({params, mechanism, "gt", summarize(gt_samples)});
    }
  }
  return result;
}

namespace {

constexpr int kCsvDigits = 6;

void write_cell(std::ostream& out, const CellParams& params) {
  out << params.n << ',' << params.k << ',' << params.m << ',' << params.ell << ','
      << format_decimal(params.phi, kCsvDigits);
}

}  // namespace

void write_records_csv(std::ostream& out, const SweepResult& result) {
  out << "n,k,m,ell,phi,trial,mechanism,overlap_v,overlap_gt,abstained\n";
  for (const auto& record : result.records) {
    for (const auto& mech_result : record.results) {
      write_cell(out, record.params);
      out << ',' << record.trial << ',' << mechanism_name(mech_result.mechanism) << ','
          << format_decimal(mech_result.overlap_vanilla, kCsvDigits) << ','
          << format_decimal(mech_result.overlap_ground_truth, kCsvDigits) << ','
          << (mech_result.abstained ? 1 : 0) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const SweepResult& result) {
  out << "n,k,m,ell,phi,mechanism,metric,mean,std,min,max,count\n";
  for (const auto& summary : result.summaries) {
    write_cell(out, summary.params);
    out << ',' << mechanism_name(summary.mechanism) << ',' << summary.metric << ','
        << format_decimal(summary.stats.mean, kCsvDigits) << ','
        << format_sqrt_decimal(summary.stats.variance, kCsvDigits) << ','
        << format_decimal(summary.stats.min, kCsvDigits) << ','
        << format_decimal(summary.stats.max, kCsvDigits) << ',' << summary.stats.count << '\n';
  }
}

}  // namespace peersel
