#pragma once

#include <cstdint>
#include <deque>
#include <span>
#include <vector>

#include "revosim/cache_policy.hpp"
#include "revosim/search_space.hpp"
#include "revosim/trace.hpp"
#include "revosim/transfer_repo.hpp"

namespace revosim {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DurationModel {
  enum class Kind { normal, lognormal };
  Kind kind = Kind::normal;
  double mu = 60.0;
  double sigma = 10.0;
  double floor = 1e-3;  // truncation: draws below this are redrawn

  void validate() const;
  double draw(Rng& rng) const;
};

enum class SchedulingMode { continuous, quanta };

struct SearchConfig {
  int total_candidates = 1000;  // N
  int population_size = 100;    // p
  int sample_size = 5;          // s
  int num_workers = 25;         // w
  DurationModel duration;
  SchedulingMode mode = SchedulingMode::continuous;
  int quanta_wait = 1;  // s_wait, quanta mode only
  bool transfer_enabled = false;
  bool population_only_donors = false;
  CachePolicy admission;  // installed in the repo; store_all by default
  bool debug_trace = false;
  std::uint64_t rng_seed = 0;
  int epochs = 50;

  void validate() const;  // throws ConfigError
};

struct PopulationEntry {
  int candidate_id = 0;
  ArchSequence sequence;
  double quality = 0.0;
  long insertion_index = 0;
};

struct DelayReport {
  std::vector<double> waits;  // one entry per post-initial dispatch
  double mean_wait = 0.0;
};

struct RunStats {
  int sampling_population_min = 0;
  int sampling_population_max = 0;
  std::vector<long> retired_insertion_indices;
  // Censored-geometric exposure for the donor-delay expectation: stage-2
  // dispatches made while the reigning cumulative-max candidate was still in
  // the population, and how many of them selected it as parent.
  long reign_trials = 0;
  long reign_selections = 0;
};

struct RunResult {
  std::vector<TraceEvent> events;  // ordered by end_ts
  DelayReport delay;
  RunStats stats;
  TransferRepo repo;
};

/// Max-quality entry of a uniform without-replacement sample of size s;
/// quality ties broken by lowest insertion_index. sampled_out, when given,
/// receives the sampled entries' candidate ids in draw order.
const PopulationEntry& select_parent(const std::deque<PopulationEntry>& population, int s,
                                     Rng& rng, std::vector<int>* sampled_out = nullptr);

/// Removes and returns the entry with the minimum insertion index.
PopulationEntry retire_oldest(std::deque<PopulationEntry>& population);

/// Executes the two-stage parallel regularized-evolution search under a
/// deterministic discrete-event simulation of an asynchronous worker pool.
RunResult run_search(const SearchConfig& config, const SpaceSpec& spec);

}  // namespace revosim
