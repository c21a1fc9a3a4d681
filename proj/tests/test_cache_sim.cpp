#include <map>
#include <set>

#include <doctest.h>

#include "revosim/cache_sim.hpp"
#include "revosim/engine.hpp"

using namespace revosim;

namespace {

RunResult transfer_run(std::uint64_t seed) {
  SpaceSpec spec;
  SearchConfig cfg;
  cfg.rng_seed = seed;
  cfg.transfer_enabled = true;
  return run_search(cfg, spec);
}

void check_conservation(const CacheReport& r, const std::vector<TraceEvent>& events) {
  CHECK(r.total_candidates() == static_cast<long>(events.size()));
  long requests = 0;
  for (const auto& e : events) {
    if (e.donor_id) ++requests;
  }
  CHECK(r.total_requests() == requests);
  CHECK(r.wasted_stores <= r.stores_made);
}

}  // namespace

TEST_CASE("store_all never misses and wastes exactly the never-donated stores") {
  const RunResult run = transfer_run(101);
  const CacheReport r = replay(run.events, CachePolicy::store_all());
  CHECK(r.donor_misses == 0);
  CHECK(r.stores_skipped == 0);
  CHECK(r.miss_penalty_prefix_slots == 0);
  check_conservation(r, run.events);

  std::set<int> donors;
  for (const auto& e : run.events) {
    if (e.donor_id) donors.insert(*e.donor_id);
  }
  CHECK(r.wasted_stores == static_cast<long>(run.events.size() - donors.size()));
}

TEST_CASE("skip_bottom keeps zero misses with fewer stores") {
  const RunResult run = transfer_run(103);
  const CacheReport all = replay(run.events, CachePolicy::store_all());
  const CacheReport skip = replay(run.events, CachePolicy::skip_bottom(5));
  CHECK(skip.donor_misses == 0);
  CHECK(skip.donor_hits == all.donor_hits);
  CHECK(skip.stores_made < all.stores_made);
  CHECK(skip.wasted_stores < all.wasted_stores);
  check_conservation(skip, run.events);
}

TEST_CASE("probability threshold trades stores against misses monotonically") {
  const RunResult run = transfer_run(107);
  const CacheReport loose = replay(run.events, CachePolicy::probability_threshold(0.001));
  const CacheReport tight = replay(run.events, CachePolicy::probability_threshold(0.5));
  CHECK(tight.stores_made <= loose.stores_made);
  CHECK(tight.donor_misses >= loose.donor_misses);
  check_conservation(loose, run.events);
  check_conservation(tight, run.events);
}

TEST_CASE("tier threshold skips cold entries and reports misses from late crossings") {
  const RunResult run = transfer_run(109);
  const CacheReport r = replay(run.events, CachePolicy::tier_threshold(5, 100));
  CHECK(r.stores_skipped > 0);
  CHECK(r.donor_hits + r.donor_misses > 0);
  check_conservation(r, run.events);

  // an entry admitted retroactively pays misses for requests before crossing
  const CacheReport all = replay(run.events, CachePolicy::store_all());
  CHECK(r.donor_hits <= all.donor_hits);
}

TEST_CASE("capacity bound evicts and induces misses under pressure") {
  const RunResult run = transfer_run(113);
  CachePolicy tiny = CachePolicy::store_all();
  tiny.capacity = 10;
  const CacheReport r = replay(run.events, tiny);
  CHECK(r.donor_misses > 0);
  CHECK(r.miss_penalty_prefix_slots >= r.donor_misses);
  check_conservation(r, run.events);
}

TEST_CASE("replay is deterministic") {
  const RunResult run = transfer_run(127);
  const CacheReport a = replay(run.events, CachePolicy::tier_threshold(5, 100));
  const CacheReport b = replay(run.events, CachePolicy::tier_threshold(5, 100));
  CHECK(a.stores_made == b.stores_made);
  CHECK(a.donor_hits == b.donor_hits);
  CHECK(a.donor_misses == b.donor_misses);
  CHECK(a.wasted_stores == b.wasted_stores);
}

TEST_CASE("replay rejects traces without donor records") {
  SpaceSpec spec;
  SearchConfig cfg;
  cfg.rng_seed = 5;
  const RunResult run = run_search(cfg, spec);  // transfer disabled
  CHECK_THROWS_AS(replay(run.events, CachePolicy::store_all()), TraceError);
}

TEST_CASE("report serializers carry every counter") {
  CacheReport r;
  r.stores_made = 7;
  r.stores_skipped = 3;
  r.donor_hits = 5;
  r.donor_misses = 2;
  r.wasted_stores = 1;
  r.miss_penalty_prefix_slots = 4;
  const std::string csv = report_to_csv(r);
  CHECK(csv ==
        "stores_made,stores_skipped,donor_hits,donor_misses,wasted_stores,"
        "miss_penalty_prefix_slots\n7,3,5,2,1,4\n");
  const std::string summary = report_summary(r);
  for (const char* needle : {"stores made", "donor hits", "wasted", "penalty"}) {
    CHECK(summary.find(needle) != std::string::npos);
  }
}
