#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "revosim/rng.hpp"

namespace revosim {

struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Fixed-length vector of variable-node choices identifying one candidate.
struct ArchSequence {
  std::vector<int> choices;

  bool operator==(const ArchSequence&) const = default;
  auto operator<=>(const ArchSequence&) const = default;
  int size() const { return static_cast<int>(choices.size()); }
};

/// Combinatorial search space plus the deterministic synthetic quality oracle.
///
/// prefix_weights[d] is the weight of the keyed-hash normal component drawn
/// from the prefix of length d+1 (the last entry covers the full sequence).
/// Weights are normalized to unit L2 internally, so quality of a uniformly
/// random sequence is distributed N(quality_mean, quality_stddev) clamped to
/// [0,1] regardless of the profile. {0,...,0,1} gives a fully independent
/// per-sequence table; weight on shorter prefixes makes quality heritable
/// across sequences sharing those prefixes.
struct SpaceSpec {
  int num_slots = 6;
  std::vector<int> choices_per_slot = {5, 5, 5, 5, 5, 5};
  std::vector<std::vector<int>> forbidden_prefixes;
  std::uint64_t quality_seed = 0;
  double quality_mean = 0.7;
  double quality_stddev = 0.1;
  std::vector<int> epoch_levels = {50, 150};
  std::vector<double> prefix_weights;  // empty -> default profile, see cpp
  double transfer_bonus_max = 0.0;     // optional concave quality bonus, off by default

  void validate() const;  // throws SpecError
  bool is_valid(const ArchSequence& seq) const;
  bool has_epoch_level(int epochs) const;
  std::vector<double> normalized_weights() const;
};

struct SpaceSize {
  std::uint64_t count = 0;  // meaningful only when exact
  bool exact = true;
  double approx = 0.0;
};

/// Count of valid sequences; exact when it fits in 2^63, otherwise flagged
/// with a floating-point approximation.
SpaceSize space_size(const SpaceSpec& spec);

/// Uniform draw over valid sequences (rejection sampling). Throws SpecError
/// after 10^6 consecutive rejections.
ArchSequence sample_uniform(const SpaceSpec& spec, Rng& rng);

/// Single-slot mutation: slot uniform over [0, L), new value uniform over the
/// slot's other values; invalid results re-draw both. Returns the mutated
/// sequence and the mutated slot index.
std::pair<ArchSequence, int> mutate(const ArchSequence& seq, const SpaceSpec& spec, Rng& rng);

/// Deterministic synthetic quality in [0,1]; pure in (seq, epochs, seed).
double quality(const ArchSequence& seq, int epochs, const SpaceSpec& spec);

}  // namespace revosim
