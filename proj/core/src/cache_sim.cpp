#include "revosim/cache_sim.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace revosim {

CacheReport replay(const std::vector<TraceEvent>& events, const CachePolicy& policy) {
  policy.validate();
  const bool has_stage2 = std::any_of(events.begin(), events.end(),
                                      [](const TraceEvent& e) { return e.stage == 2; });
  const bool has_donor_fields = std::any_of(events.begin(), events.end(), [](const TraceEvent& e) {
    return e.donor_id.has_value() || e.donor_prefix_len.has_value();
  });
  if (has_stage2 && !has_donor_fields) {
    throw TraceError("replay: trace records no donor requests (transfer disabled?)");
  }

  long p = std::count_if(events.begin(), events.end(),
                         [](const TraceEvent& e) { return e.stage == 1; });

  std::deque<const TraceEvent*> population;
  std::unordered_set<int> stored;
  std::unordered_set<int> ever_stored;
  std::unordered_set<int> donated_ever;
  std::vector<int> store_order;  // for capacity eviction
  std::deque<std::pair<long, int>> donation_window;  // (event index, donor id)
  std::unordered_map<int, int> window_counts;

  CacheReport report;

  auto store = [&](int id) {
    if (stored.insert(id).second) {
      ever_stored.insert(id);
      store_order.push_back(id);
      if (policy.capacity && static_cast<long>(stored.size()) > *policy.capacity) {
        // FIFO among never-donated entries; oldest overall as a fallback
        auto victim = std::find_if(store_order.begin(), store_order.end(), [&](int v) {
          return stored.count(v) && !donated_ever.count(v);
        });
        if (victim == store_order.end()) {
          victim = std::find_if(store_order.begin(), store_order.end(),
                                [&](int v) { return stored.count(v) != 0; });
        }
        stored.erase(*victim);
        store_order.erase(victim);
      }
    }
  };

  for (long i = 0; i < static_cast<long>(events.size()); ++i) {
    const TraceEvent& e = events[i];

    // slide the donation window before handling this event
    while (!donation_window.empty() && donation_window.front().first <= i - policy.window) {
      auto& [_, donor] = donation_window.front();
      if (--window_counts[donor] == 0) window_counts.erase(donor);
      donation_window.pop_front();
    }

    // score this event's donor request against the current stored set
    if (e.donor_id) {
      donated_ever.insert(*e.donor_id);
      if (stored.count(*e.donor_id)) {
        ++report.donor_hits;
      } else {
        ++report.donor_misses;
        report.miss_penalty_prefix_slots += e.donor_prefix_len.value_or(0);
      }
      donation_window.emplace_back(i, *e.donor_id);
      const int count = ++window_counts[*e.donor_id];
      if (policy.kind == CachePolicy::Kind::tier_threshold && count >= policy.min_donations) {
        store(*e.donor_id);  // retroactive admission once the threshold is crossed
      }
    }

    // population update mirrors the engine's atomic completion handler
    if (e.stage == 2 && !population.empty()) population.pop_front();
    population.push_back(&e);

    AdmitContext ctx;
    ctx.population_size = static_cast<int>(population.size());
    ctx.population_full = static_cast<long>(population.size()) >= p;
    ctx.population_rank = 1;
    for (const TraceEvent* m : population) {
      if (m->candidate_id != e.candidate_id && m->quality < e.quality) ++ctx.population_rank;
    }
    ctx.recent_donations = 0;
    if (auto it = window_counts.find(e.candidate_id); it != window_counts.end()) {
      ctx.recent_donations = it->second;
    }

    if (policy_admits(policy, ctx)) store(e.candidate_id);
  }

  report.stores_made = static_cast<long>(ever_stored.size());
  report.stores_skipped = static_cast<long>(events.size()) - report.stores_made;
  for (int id : ever_stored) {
    if (!donated_ever.count(id)) ++report.wasted_stores;
  }
  return report;
}

std::string report_to_csv(const CacheReport& r) {
  std::ostringstream out;
  out << "stores_made,stores_skipped,donor_hits,donor_misses,wasted_stores,"
         "miss_penalty_prefix_slots\n";
  out << r.stores_made << ',' << r.stores_skipped << ',' << r.donor_hits << ','
      << r.donor_misses << ',' << r.wasted_stores << ',' << r.miss_penalty_prefix_slots << '\n';
  return out.str();
}

std::string report_summary(const CacheReport& r) {
  std::ostringstream out;
  out << "stores made:       " << r.stores_made << "\n"
      << "stores skipped:    " << r.stores_skipped << "\n"
      << "donor hits:        " << r.donor_hits << "\n"
      << "donor misses:      " << r.donor_misses << "\n"
      << "wasted stores:     " << r.wasted_stores << "\n"
      << "miss penalty:      " << r.miss_penalty_prefix_slots << " prefix slots\n";
  return out.str();
}

}  // namespace revosim
