#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "revosim/trace.hpp"

namespace revosim {

struct AnalyticsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Frequency-annotated trie over sequence prefixes.
struct TrieNode {
  int slot_depth = 0;    // root = 0
  int choice_value = -1;  // -1 for root
  long occurrence_count = 0;
  double occurrence_fraction = 0.0;
  long transfer_count = 0;  // donor requests whose donor passes through this node
  std::map<int, std::unique_ptr<TrieNode>> children;
};

struct PrefixTrie {
  std::unique_ptr<TrieNode> root;
  long total_sequences = 0;
  double prune_threshold = 0.0;

  long node_count() const;
};

/// Counts every event's sequence path, then prunes nodes whose occurrence
/// fraction is below `prune_threshold`. Pruning never alters retained counts.
PrefixTrie build_trie(const std::vector<TraceEvent>& events, double prune_threshold,
                      std::optional<int> depth_limit = std::nullopt);

/// Graphviz DOT export: node labels "choice (pct%)", fill color scaled
/// red (frequent) to blue (rare) by occurrence fraction; transfer counts
/// exported as a separate node attribute.
std::string trie_to_dot(const PrefixTrie& trie);

struct WindowHistogram {
  int window_end_index = 0;  // index one past the last event in the window
  int prefix_len = 0;
  int window_size = 0;
  std::map<std::vector<int>, int> counts;
};

/// Sliding prefix histograms over the last `window_size` events, advancing by
/// `stride`. Events must be in end_ts order.
std::vector<WindowHistogram> window_histograms(const std::vector<TraceEvent>& events,
                                               int window_size, int prefix_len, int stride);

struct TierReport {
  double t1_frac = 0.30;
  int t2_max_count = 25;
  int t3_max_count = 3;
  std::map<std::vector<int>, int> tiers;  // prefix -> tier in {1,2,3}
};

/// tier 1 iff count >= t1_frac * window_size; tier 3 iff count <= t3_max_count;
/// tier 2 otherwise.
TierReport classify_tiers(const WindowHistogram& histogram, double t1_frac = 0.30,
                          int t2_max_count = 25, int t3_max_count = 3);

struct QualityStep {
  int event_index = 0;
  double old_max = 0.0;
  double new_max = 0.0;
};

struct QualitySeries {
  std::vector<double> quality;         // per event
  std::vector<double> cumulative_max;  // nondecreasing
  std::vector<QualityStep> steps;      // strict improvements (first event included)
};

QualitySeries quality_series(const std::vector<TraceEvent>& events);

struct DonorWindowCounts {
  int window_end_index = 0;
  std::map<int, int> counts;  // donor candidate_id -> occurrences in window
};

/// Donor-id counts among the last `window_size` events, per window position.
std::vector<DonorWindowCounts> donor_frequency(const std::vector<TraceEvent>& events,
                                               int window_size);

struct DonorRun {
  int worker_id = 0;
  int donor_id = 0;
  int length = 0;
};

struct BucketCoOccurrence {
  int bucket = 0;
  int donor_id = 0;
  int distinct_workers = 0;
};

struct LocalityReport {
  std::vector<int> top_donors;  // most frequent donors considered (see exclude_top)
  std::vector<DonorRun> runs;   // per-worker consecutive uses of the same donor
  std::vector<BucketCoOccurrence> co_occurrence;
};

/// Per-worker repeat runs and cross-worker co-occurrence (by begin_ts bucket)
/// for the top_k most frequent donors. exclude_top drops the single most
/// frequent donor first, mirroring scatter plots that omit it for clarity.
LocalityReport worker_locality(const std::vector<TraceEvent>& events, int top_k,
                               double time_bucket, bool exclude_top = true);

// CSV exports (documented headers, one row per record).
std::string histograms_to_csv(const std::vector<WindowHistogram>& histograms);
std::string tiers_to_csv(const WindowHistogram& histogram, const TierReport& report);
std::string quality_series_to_csv(const QualitySeries& series);
std::string locality_to_csv(const LocalityReport& report);

}  // namespace revosim
