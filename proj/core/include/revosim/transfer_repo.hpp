#pragma once

#include <optional>
#include <unordered_map>
#include <vector>

#include "revosim/cache_policy.hpp"
#include "revosim/search_space.hpp"

namespace revosim {

struct RepoEntry {
  int candidate_id = 0;
  ArchSequence sequence;
  double quality = 0.0;
  bool stored = false;
  int donor_count = 0;
};

struct DonorMatch {
  int candidate_id = 0;
  int prefix_len = 0;
};

/// Length of the longest common prefix of two equal-length sequences.
/// For a single-slot mutation at index m this is m.
int transferable_prefix(const ArchSequence& child, const ArchSequence& parent);

/// Stores evaluated candidates and answers greedy longest-common-prefix donor
/// queries. Single-writer; mutations happen inside the engine's event handlers.
class TransferRepo {
 public:
  /// Admission decision is applied once; returns stored flag.
  bool add(RepoEntry entry, const CachePolicy& policy, const AdmitContext& context);

  /// Longest-common-prefix donor among stored entries; ties broken by higher
  /// quality, then lower candidate_id. none when the best prefix length is 0.
  std::optional<DonorMatch> find_donor(const ArchSequence& child) const;

  /// As find_donor, but only over stored entries whose id is in `population`.
  std::optional<DonorMatch> find_donor_among(const ArchSequence& child,
                                             const std::vector<int>& population) const;

  const RepoEntry* find(int candidate_id) const;
  void record_donation(int candidate_id);

  const std::vector<RepoEntry>& entries() const { return entries_; }
  int total_donations() const { return total_donations_; }

 private:
  std::vector<RepoEntry> entries_;
  std::unordered_map<int, std::size_t> by_id_;
  int total_donations_ = 0;
};

}  // namespace revosim
