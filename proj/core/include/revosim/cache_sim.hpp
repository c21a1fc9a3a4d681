#pragma once

#include <string>
#include <vector>

#include "revosim/cache_policy.hpp"
#include "revosim/trace.hpp"

namespace revosim {

struct CacheReport {
  long stores_made = 0;
  long stores_skipped = 0;
  long donor_hits = 0;
  long donor_misses = 0;
  long wasted_stores = 0;             // stored, never donated
  long miss_penalty_prefix_slots = 0;  // transferable slots lost to misses

  long total_candidates() const { return stores_made + stores_skipped; }
  long total_requests() const { return donor_hits + donor_misses; }
};

/// Deterministic counterfactual-free replay of a transfer-enabled trace
/// against an admission policy. Population membership and ranks are
/// reconstructed from the trace (stage-1 event count = p). The trace's
/// recorded donor choices are never altered; a policy-induced skip of a
/// requested donor counts as a miss.
CacheReport replay(const std::vector<TraceEvent>& events, const CachePolicy& policy);

std::string report_to_csv(const CacheReport& report);
std::string report_summary(const CacheReport& report);

}  // namespace revosim
