#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "revosim/search_space.hpp"

namespace revosim {

struct TraceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One candidate evaluation. Timestamps are simulated seconds. The two
/// trailing fields appear only in debug-mode traces.
struct TraceEvent {
  int candidate_id = 0;
  double begin_ts = 0.0;
  double end_ts = 0.0;
  int worker_id = 0;
  ArchSequence sequence;
  double quality = 0.0;
  int stage = 1;
  std::optional<int> donor_id;
  std::optional<int> donor_prefix_len;
  std::optional<int> mutation_index;
  std::optional<std::vector<int>> sampled_ids;

  bool operator==(const TraceEvent&) const = default;
};

/// Round to `digits` significant digits (the trace file's float resolution).
double round_sig(double value, int digits = 9);

/// Serialize one event as a single JSON line with fixed field order and
/// 9-significant-digit floats.
std::string format_event(const TraceEvent& event);

/// Buffered write, single flush: one JSON record per line, ordered by end_ts.
void write_trace(const std::vector<TraceEvent>& events, const std::string& path);

/// Inverse of write_trace. Rejects malformed lines (with line numbers) and
/// invariant violations (end_ts <= begin_ts, unsorted file, duplicate ids).
std::vector<TraceEvent> read_trace(const std::string& path);

}  // namespace revosim
