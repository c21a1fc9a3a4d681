#include <algorithm>
#include <cmath>
#include <map>

#include <doctest.h>

#include "revosim/prob.hpp"
#include "revosim/search_space.hpp"

using namespace revosim;

namespace {

SpaceSpec small_spec(int slots, std::vector<int> choices) {
  SpaceSpec s;
  s.num_slots = slots;
  s.choices_per_slot = std::move(choices);
  return s;
}

// exhaustive enumeration of valid sequences, for oracle comparisons
long enumerate_valid(const SpaceSpec& spec) {
  long count = 0;
  ArchSequence seq;
  seq.choices.assign(spec.num_slots, 0);
  while (true) {
    if (spec.is_valid(seq)) ++count;
    int i = spec.num_slots - 1;
    while (i >= 0 && ++seq.choices[i] == spec.choices_per_slot[i]) seq.choices[i--] = 0;
    if (i < 0) break;
  }
  return count;
}

}  // namespace

TEST_CASE("space_size of the default space is 5^6") {
  SpaceSpec spec;
  const SpaceSize size = space_size(spec);
  CHECK(size.exact);
  CHECK(size.count == 15625);
}

TEST_CASE("space_size of a single 2-choice slot is 2") {
  const SpaceSize size = space_size(small_spec(1, {2}));
  CHECK(size.exact);
  CHECK(size.count == 2);
}

TEST_CASE("space_size subtracts forbidden-prefix matches") {
  SpaceSpec spec = small_spec(3, {2, 2, 2});
  spec.forbidden_prefixes = {{0, 0}};
  const SpaceSize size = space_size(spec);
  CHECK(size.exact);
  CHECK(size.count == 6);
}

TEST_CASE("space_size matches enumeration for random rule sets") {
  Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    SpaceSpec spec;
    spec.num_slots = 2 + rng.below(3);
    spec.choices_per_slot.clear();
    for (int i = 0; i < spec.num_slots; ++i) spec.choices_per_slot.push_back(2 + rng.below(3));
    const int rules = rng.below(4);
    for (int r = 0; r < rules; ++r) {
      std::vector<int> prefix;
      const int len = 1 + rng.below(spec.num_slots);
      for (int i = 0; i < len; ++i) prefix.push_back(rng.below(spec.choices_per_slot[i]));
      spec.forbidden_prefixes.push_back(std::move(prefix));
    }
    const long expected = enumerate_valid(spec);
    if (expected == 0) continue;  // validate() would reject; not a sizing case
    const SpaceSize size = space_size(spec);
    CHECK(size.exact);
    CHECK(static_cast<long>(size.count) == expected);
  }
}

TEST_CASE("validate rejects 1-choice slots and empty spaces") {
  CHECK_THROWS_AS(small_spec(2, {1, 5}).validate(), SpecError);
  SpaceSpec empty = small_spec(1, {2});
  empty.forbidden_prefixes = {{0}, {1}};
  CHECK_THROWS_AS(empty.validate(), SpecError);
}

TEST_CASE("sample_uniform is balanced on a 2-choice slot") {
  const SpaceSpec spec = small_spec(1, {2});
  Rng rng(7);
  int ones = 0;
  for (int i = 0; i < 10000; ++i) ones += sample_uniform(spec, rng).choices[0];
  CHECK(std::abs(ones / 10000.0 - 0.5) < 0.02);
}

TEST_CASE("sample_uniform avoids forbidden prefixes") {
  SpaceSpec spec = small_spec(1, {2});
  spec.forbidden_prefixes = {{0}};
  Rng rng(3);
  for (int i = 0; i < 200; ++i) CHECK(sample_uniform(spec, rng).choices[0] == 1);
}

TEST_CASE("sample_uniform passes chi-square against uniform over 8 outcomes") {
  const SpaceSpec spec = small_spec(3, {2, 2, 2});
  Rng rng(13);
  std::map<std::vector<int>, int> counts;
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[sample_uniform(spec, rng).choices];
  double chi2 = 0.0;
  const double expected = n / 8.0;
  for (const auto& [_, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(counts.size() == 8);
  CHECK(chi2 < 18.48);  // chi-square(7 dof) critical value at alpha = 0.01
}

TEST_CASE("mutate on a 2-choice single slot flips it") {
  const SpaceSpec spec = small_spec(1, {2});
  Rng rng(1);
  ArchSequence seq;
  seq.choices = {0};
  const auto [child, slot] = mutate(seq, spec, rng);
  CHECK(child.choices == std::vector<int>{1});
  CHECK(slot == 0);
}

TEST_CASE("mutate changes exactly one slot") {
  SpaceSpec spec;
  Rng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const ArchSequence parent = sample_uniform(spec, rng);
    const auto [child, slot] = mutate(parent, spec, rng);
    int hamming = 0;
    for (int i = 0; i < spec.num_slots; ++i) {
      if (parent.choices[i] != child.choices[i]) {
        ++hamming;
        CHECK(i == slot);
      }
    }
    CHECK(hamming == 1);
    CHECK(spec.is_valid(child));
  }
}

TEST_CASE("mutation index is uniform over slots") {
  SpaceSpec spec;
  Rng rng(17);
  ArchSequence seq = sample_uniform(spec, rng);
  std::vector<long> hist(spec.num_slots, 0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto [child, slot] = mutate(seq, spec, rng);
    ++hist[slot];
    sum += slot;
  }
  CHECK(std::abs(sum / n - 2.5) < 0.05);
  double chi2 = 0.0;
  const double expected = static_cast<double>(n) / spec.num_slots;
  for (long c : hist) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 15.09);  // chi-square(5 dof) critical value at alpha = 0.01
}

TEST_CASE("mutate redraws into validity under forbidden prefixes") {
  SpaceSpec spec = small_spec(2, {2, 2});
  spec.forbidden_prefixes = {{1}};
  Rng rng(23);
  ArchSequence seq;
  seq.choices = {0, 0};
  for (int i = 0; i < 500; ++i) {
    const auto [child, slot] = mutate(seq, spec, rng);
    CHECK(child.choices == std::vector<int>{0, 1});
    CHECK(slot == 1);
  }
}

TEST_CASE("quality is deterministic and respects epoch levels") {
  SpaceSpec spec;
  Rng rng(2);
  const ArchSequence seq = sample_uniform(spec, rng);
  CHECK(quality(seq, 50, spec) == quality(seq, 50, spec));
  CHECK(quality(seq, 50, spec) != quality(seq, 150, spec));
  CHECK_THROWS_AS(quality(seq, 99, spec), SpecError);
}

TEST_CASE("zero stddev pins quality at the mean") {
  SpaceSpec spec;
  spec.quality_stddev = 0.0;
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    CHECK(quality(sample_uniform(spec, rng), 50, spec) == doctest::Approx(0.7));
  }
}

TEST_CASE("independent-table quality profile is normal at the configured moments") {
  SpaceSpec spec;
  spec.prefix_weights = {0, 0, 0, 0, 0, 1};  // per-sequence table, no prefix sharing
  Rng rng(29);
  const int n = 10000;
  std::vector<double> values;
  values.reserve(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double q = quality(sample_uniform(spec, rng), 50, spec);
    values.push_back(q);
    sum += q;
  }
  const double mean = sum / n;
  const double se = spec.quality_stddev / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean - spec.quality_mean) < 3 * se);

  // Kolmogorov-Smirnov against N(0.7, 0.1); clamping is negligible at 3 sigma
  std::sort(values.begin(), values.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = prob::normal_cdf((values[i] - spec.quality_mean) / spec.quality_stddev);
    d = std::max(d, std::abs(f - (i + 1.0) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));  // alpha = 0.01
}

TEST_CASE("default heritable profile keeps the marginal distribution") {
  SpaceSpec spec;  // default prefix weights share quality across prefixes
  Rng rng(31);
  const int n = 10000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double q = quality(sample_uniform(spec, rng), 50, spec);
    sum += q;
    sq += q * q;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean - 0.7) < 0.01);
  CHECK(std::abs(std::sqrt(var) - 0.1) < 0.01);
}
