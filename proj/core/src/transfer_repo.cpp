#include "revosim/transfer_repo.hpp"

#include <stdexcept>

#include "revosim/prob.hpp"

namespace revosim {

int transferable_prefix(const ArchSequence& child, const ArchSequence& parent) {
  if (child.size() != parent.size()) {
    throw std::invalid_argument("transferable_prefix: length mismatch");
  }
  int n = 0;
  while (n < child.size() && child.choices[n] == parent.choices[n]) ++n;
  return n;
}

bool policy_admits(const CachePolicy& policy, const AdmitContext& ctx) {
  policy.validate();
  switch (policy.kind) {
    case CachePolicy::Kind::store_all:
      return true;
    case CachePolicy::Kind::skip_bottom:
      // Rank-at-admission is meaningless while the population is filling.
      return !ctx.population_full || ctx.population_rank >= policy.sample_size;
    case CachePolicy::Kind::probability_threshold: {
      if (!ctx.population_full) return true;
      const double bound = prob::transfer_prob_bound(
          static_cast<std::uint64_t>(ctx.population_size),
          static_cast<std::uint64_t>(ctx.population_rank),
          static_cast<std::uint64_t>(policy.sample_size));
      return bound >= policy.epsilon;
    }
    case CachePolicy::Kind::tier_threshold:
      return ctx.recent_donations >= policy.min_donations;
  }
  return true;
}

bool TransferRepo::add(RepoEntry entry, const CachePolicy& policy, const AdmitContext& context) {
  entry.stored = policy_admits(policy, context);
  const bool stored = entry.stored;
  by_id_[entry.candidate_id] = entries_.size();
  entries_.push_back(std::move(entry));
  return stored;
}

std::optional<DonorMatch> TransferRepo::find_donor(const ArchSequence& child) const {
  const RepoEntry* best = nullptr;
  int best_len = 0;
  for (const auto& e : entries_) {
    if (!e.stored) continue;
    const int len = transferable_prefix(child, e.sequence);
    if (len == 0) continue;
    if (!best || len > best_len ||
        (len == best_len && (e.quality > best->quality ||
                             (e.quality == best->quality && e.candidate_id < best->candidate_id)))) {
      best = &e;
      best_len = len;
    }
  }
  if (!best) return std::nullopt;
  return DonorMatch{best->candidate_id, best_len};
}

std::optional<DonorMatch> TransferRepo::find_donor_among(
    const ArchSequence& child, const std::vector<int>& population) const {
  const RepoEntry* best = nullptr;
  int best_len = 0;
  for (int id : population) {
    const RepoEntry* e = find(id);
    if (!e || !e->stored) continue;
    const int len = transferable_prefix(child, e->sequence);
    if (len == 0) continue;
    if (!best || len > best_len ||
        (len == best_len && (e->quality > best->quality ||
                             (e->quality == best->quality && e->candidate_id < best->candidate_id)))) {
      best = e;
      best_len = len;
    }
  }
  if (!best) return std::nullopt;
  return DonorMatch{best->candidate_id, best_len};
}

const RepoEntry* TransferRepo::find(int candidate_id) const {
  auto it = by_id_.find(candidate_id);
  if (it == by_id_.end()) return nullptr;
  return &entries_[it->second];
}

void TransferRepo::record_donation(int candidate_id) {
  auto it = by_id_.find(candidate_id);
  if (it == by_id_.end()) throw std::invalid_argument("record_donation: unknown candidate");
  ++entries_[it->second].donor_count;
  ++total_donations_;
}

}  // namespace revosim
