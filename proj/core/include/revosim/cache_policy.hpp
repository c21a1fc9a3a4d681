#pragma once

#include <optional>
#include <stdexcept>

namespace revosim {

struct PolicyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Admission/eviction policy for the transfer repository and replay.
struct CachePolicy {
  enum class Kind { store_all, skip_bottom, probability_threshold, tier_threshold };

  Kind kind = Kind::store_all;
  int sample_size = 5;            // s; used by skip_bottom and probability_threshold
  double epsilon = 0.01;          // probability_threshold
  int min_donations = 5;          // tier_threshold
  int window = 100;               // tier_threshold
  std::optional<int> capacity;    // max stored entries, FIFO among never-donated

  void validate() const {
    if (sample_size < 1) throw PolicyError("policy sample_size must be >= 1");
    if (kind == Kind::probability_threshold && !(epsilon > 0.0 && epsilon < 1.0)) {
      throw PolicyError("probability_threshold epsilon must lie in (0, 1)");
    }
    if (kind == Kind::tier_threshold) {
      if (min_donations < 1) throw PolicyError("tier_threshold min_donations must be >= 1");
      if (window < min_donations) throw PolicyError("tier_threshold window must be >= min_donations");
    }
    if (capacity && *capacity < 1) throw PolicyError("capacity must be >= 1");
  }

  static CachePolicy store_all() { return {}; }
  static CachePolicy skip_bottom(int s = 5) {
    CachePolicy p;
    p.kind = Kind::skip_bottom;
    p.sample_size = s;
    return p;
  }
  static CachePolicy probability_threshold(double eps, int s = 5) {
    CachePolicy p;
    p.kind = Kind::probability_threshold;
    p.epsilon = eps;
    p.sample_size = s;
    return p;
  }
  static CachePolicy tier_threshold(int min_donations, int window) {
    CachePolicy p;
    p.kind = Kind::tier_threshold;
    p.min_donations = min_donations;
    p.window = window;
    return p;
  }
};

/// Population context at an admission decision.
struct AdmitContext {
  int population_rank = 1;     // 1 = worst, population_size = best, incl. the entry
  int population_size = 1;
  bool population_full = false;
  int recent_donations = 0;    // donations by this entry within the policy window
};

/// Shared admission decision used by the live repository and trace replay.
bool policy_admits(const CachePolicy& policy, const AdmitContext& context);

}  // namespace revosim
