#include "revosim/search_space.hpp"

#include <algorithm>
#include <cmath>

#include "revosim/prob.hpp"

namespace revosim {

namespace {
constexpr int kMaxRejections = 1'000'000;

bool matches_prefix(const ArchSequence& seq, const std::vector<int>& prefix) {
  if (prefix.size() > seq.choices.size()) return false;
  return std::equal(prefix.begin(), prefix.end(), seq.choices.begin());
}
}  // namespace

void SpaceSpec::validate() const {
  if (num_slots < 1) throw SpecError("num_slots must be positive");
  if (static_cast<int>(choices_per_slot.size()) != num_slots) {
    throw SpecError("choices_per_slot must have num_slots entries");
  }
  for (int c : choices_per_slot) {
    if (c < 2) throw SpecError("every slot needs at least 2 choices to be mutable");
  }
  if (!(quality_stddev >= 0.0)) throw SpecError("quality_stddev must be nonnegative");
  if (epoch_levels.empty()) throw SpecError("epoch_levels must be non-empty");
  for (int e : epoch_levels) {
    if (e < 1) throw SpecError("epoch levels must be positive");
  }
  for (const auto& rule : forbidden_prefixes) {
    if (rule.empty() || static_cast<int>(rule.size()) > num_slots) {
      throw SpecError("forbidden prefix length must be in [1, num_slots]");
    }
    for (std::size_t i = 0; i < rule.size(); ++i) {
      if (rule[i] < 0 || rule[i] >= choices_per_slot[i]) {
        throw SpecError("forbidden prefix entry out of slot range");
      }
    }
  }
  if (!prefix_weights.empty() && static_cast<int>(prefix_weights.size()) != num_slots) {
    throw SpecError("prefix_weights must have num_slots entries");
  }
  double wsum = 0.0;
  for (double w : prefix_weights) {
    if (w < 0.0) throw SpecError("prefix_weights must be nonnegative");
    wsum += w * w;
  }
  if (!prefix_weights.empty() && wsum == 0.0) {
    throw SpecError("prefix_weights must not be all zero");
  }
  if (transfer_bonus_max < 0.0) throw SpecError("transfer_bonus_max must be nonnegative");
  SpaceSize size = space_size(*this);
  if (size.exact && size.count == 0) throw SpecError("validity rules leave no valid sequence");
}

bool SpaceSpec::is_valid(const ArchSequence& seq) const {
  for (const auto& rule : forbidden_prefixes) {
    if (matches_prefix(seq, rule)) return false;
  }
  return true;
}

bool SpaceSpec::has_epoch_level(int epochs) const {
  return std::find(epoch_levels.begin(), epoch_levels.end(), epochs) != epoch_levels.end();
}

std::vector<double> SpaceSpec::normalized_weights() const {
  std::vector<double> w = prefix_weights;
  if (w.empty()) {
    // Default profile: correlated at depths 2 and 3 plus an independent
    // full-sequence component. Mimics benchmark landscapes where early
    // layers dominate quality.
    w.assign(num_slots, 0.0);
    if (num_slots >= 3) {
      w[1] = 0.65;
      w[2] = 0.65;
    }
    w[num_slots - 1] += std::sqrt(1.0 - 2 * 0.65 * 0.65);
  }
  double norm = 0.0;
  for (double x : w) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : w) x /= norm;
  return w;
}

SpaceSize space_size(const SpaceSpec& spec) {
  // Keep only rules not shadowed by a shorter rule; the remaining rules have
  // pairwise disjoint match sets (two prefixes can share a sequence only if
  // one is a prefix of the other).
  std::vector<std::vector<int>> rules;
  for (const auto& r : spec.forbidden_prefixes) {
    bool shadowed = false;
    for (const auto& other : spec.forbidden_prefixes) {
      if (&other == &r) continue;
      if (other.size() < r.size() ||
          (other.size() == r.size() && &other < &r && other == r)) {
        if (std::equal(other.begin(), other.end(), r.begin())) {
          shadowed = true;
          break;
        }
      }
    }
    if (!shadowed) rules.push_back(r);
  }

  long double total_approx = 1.0L;
  std::uint64_t total = 1;
  bool exact = true;
  for (int c : spec.choices_per_slot) {
    total_approx *= c;
    if (exact && total > UINT64_MAX / static_cast<std::uint64_t>(c)) {
      exact = false;
    } else if (exact) {
      total *= static_cast<std::uint64_t>(c);
    }
  }
  if (exact && total > (1ULL << 63)) exact = false;

  long double forbidden_approx = 0.0L;
  std::uint64_t forbidden = 0;
  for (const auto& r : rules) {
    long double m = 1.0L;
    std::uint64_t mi = 1;
    for (std::size_t i = r.size(); i < spec.choices_per_slot.size(); ++i) {
      m *= spec.choices_per_slot[i];
      mi *= static_cast<std::uint64_t>(spec.choices_per_slot[i]);
    }
    forbidden_approx += m;
    forbidden += mi;
  }

  SpaceSize out;
  out.exact = exact;
  out.approx = static_cast<double>(total_approx - forbidden_approx);
  out.count = exact ? total - forbidden : 0;
  return out;
}

ArchSequence sample_uniform(const SpaceSpec& spec, Rng& rng) {
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    ArchSequence seq;
    seq.choices.resize(spec.num_slots);
    for (int i = 0; i < spec.num_slots; ++i) {
      seq.choices[i] = rng.below(spec.choices_per_slot[i]);
    }
    if (spec.is_valid(seq)) return seq;
  }
  throw SpecError("sample_uniform: rejection limit reached; degenerate validity rules");
}

std::pair<ArchSequence, int> mutate(const ArchSequence& seq, const SpaceSpec& spec, Rng& rng) {
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const int slot = rng.below(spec.num_slots);
    const int old = seq.choices[slot];
    int value = rng.below(spec.choices_per_slot[slot] - 1);
    if (value >= old) ++value;  // uniform over the other values
    ArchSequence child = seq;
    child.choices[slot] = value;
    if (spec.is_valid(child)) return {std::move(child), slot};
  }
  throw SpecError("mutate: rejection limit reached; degenerate validity rules");
}

double quality(const ArchSequence& seq, int epochs, const SpaceSpec& spec) {
  if (!spec.has_epoch_level(epochs)) {
    throw SpecError("quality: epochs " + std::to_string(epochs) + " not in epoch_levels");
  }
  const std::vector<double> w = spec.normalized_weights();
  std::uint64_t base = hash_combine(mix64(spec.quality_seed),
                                    static_cast<std::uint64_t>(epochs));
  double z = 0.0;
  std::uint64_t h = base;
  for (int d = 0; d < spec.num_slots; ++d) {
    h = hash_combine(h, static_cast<std::uint64_t>(seq.choices[d]) + 1);
    if (w[d] == 0.0) continue;
    const std::uint64_t hd = hash_combine(h, static_cast<std::uint64_t>(d) + 0x5151ULL);
    const double u = (static_cast<double>(hd >> 11) + 0.5) * 0x1p-53;
    z += w[d] * prob::inverse_normal_cdf(u);
  }
  const double q = spec.quality_mean + spec.quality_stddev * z;
  return std::clamp(q, 0.0, 1.0);
}

}  // namespace revosim
