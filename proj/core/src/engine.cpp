#include "revosim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "revosim/prob.hpp"

namespace revosim {

void DurationModel::validate() const {
  if (!(mu > 0.0)) throw ConfigError("duration mu must be positive");
  if (sigma < 0.0) throw ConfigError("duration sigma must be nonnegative");
  if (!(floor > 0.0)) throw ConfigError("duration floor must be positive");
}

double DurationModel::draw(Rng& rng) const {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double z = sigma == 0.0 ? 0.0 : prob::inverse_normal_cdf(rng.unit());
    const double d = kind == Kind::normal ? mu + sigma * z : std::exp(std::log(mu) + sigma * z);
    if (d >= floor) return d;
  }
  return floor;
}

void SearchConfig::validate() const {
  if (total_candidates < 1) throw ConfigError("total_candidates must be positive");
  if (population_size < 1) throw ConfigError("population_size must be positive");
  if (sample_size < 1) throw ConfigError("sample_size must be positive");
  if (sample_size >= population_size) throw ConfigError("sample_size must be < population_size");
  if (population_size > total_candidates) {
    throw ConfigError("population_size must be <= total_candidates");
  }
  if (num_workers < 1) throw ConfigError("num_workers must be positive");
  duration.validate();
  if (mode == SchedulingMode::quanta) {
    if (quanta_wait < 1 || quanta_wait > num_workers) {
      throw ConfigError("quanta_wait must lie in [1, num_workers]");
    }
  }
  admission.validate();
  if (epochs < 1) throw ConfigError("epochs must be positive");
}

const PopulationEntry& select_parent(const std::deque<PopulationEntry>& population, int s,
                                     Rng& rng, std::vector<int>* sampled_out) {
  const int p = static_cast<int>(population.size());
  if (p < s) throw ConfigError("select_parent: population smaller than sample size");
  // draw s distinct indices; s << p, so rejection terminates quickly
  std::vector<int> indices;
  indices.reserve(s);
  while (static_cast<int>(indices.size()) < s) {
    const int idx = rng.below(p);
    if (std::find(indices.begin(), indices.end(), idx) == indices.end()) {
      indices.push_back(idx);
    }
  }
  const PopulationEntry* best = nullptr;
  for (int idx : indices) {
    const PopulationEntry& e = population[idx];
    if (!best || e.quality > best->quality ||
        (e.quality == best->quality && e.insertion_index < best->insertion_index)) {
      best = &e;
    }
  }
  if (sampled_out) {
    sampled_out->clear();
    for (int idx : indices) sampled_out->push_back(population[idx].candidate_id);
  }
  return *best;
}

PopulationEntry retire_oldest(std::deque<PopulationEntry>& population) {
  if (population.empty()) throw ConfigError("retire_oldest: empty population");
  PopulationEntry oldest = std::move(population.front());
  population.pop_front();
  return oldest;
}

namespace {

struct Evaluation {
  double end_time = 0.0;
  int worker_id = 0;
  TraceEvent event;  // begin/end rounded; end_time above is unrounded
};

struct EvalLater {
  bool operator()(const Evaluation& a, const Evaluation& b) const {
    if (a.end_time != b.end_time) return a.end_time > b.end_time;
    return a.worker_id > b.worker_id;
  }
};

struct IdleWorker {
  int worker_id = 0;
  double idle_since = 0.0;
};

class Simulation {
 public:
  Simulation(const SearchConfig& config, const SpaceSpec& spec)
      : config_(config), spec_(spec), rng_(config.rng_seed) {}

  RunResult run() {
    const int n = config_.total_candidates;
    const int p = config_.population_size;
    stage1_left_ = p;
    stage2_left_ = n - p;
    stats_.sampling_population_min = std::numeric_limits<int>::max();
    stats_.sampling_population_max = 0;

    for (int w = 0; w < config_.num_workers; ++w) idle_.push_back({w, 0.0});
    dispatch_ready(0.0, /*initial=*/true);

    while (!queue_.empty()) {
      Evaluation ev = queue_.top();
      queue_.pop();
      complete(ev);
      idle_.push_back({ev.worker_id, ev.end_time});
      dispatch_ready(ev.end_time, /*initial=*/false);
    }

    if (stats_.sampling_population_min == std::numeric_limits<int>::max()) {
      stats_.sampling_population_min = 0;
    }
    std::stable_sort(events_.begin(), events_.end(), [](const auto& a, const auto& b) {
      return a.end_ts < b.end_ts;
    });
    RunResult result;
    result.events = std::move(events_);
    result.delay.waits = std::move(waits_);
    if (!result.delay.waits.empty()) {
      double sum = 0.0;
      for (double w : result.delay.waits) sum += w;
      result.delay.mean_wait = sum / static_cast<double>(result.delay.waits.size());
    }
    result.stats = std::move(stats_);
    result.repo = std::move(repo_);
    return result;
  }

 private:
  bool stage2_open() const { return stage1_completed_ == config_.population_size; }

  bool work_available() const {
    return stage1_left_ > 0 || (stage2_open() && stage2_left_ > 0);
  }

  void dispatch_ready(double now, bool initial) {
    if (!work_available()) return;
    if (stage2_open() && !stage2_opened_seen_) {
      stage2_opened_seen_ = true;
      stage2_open_time_ = now;
    }
    const bool batch_ready =
        initial || config_.mode == SchedulingMode::continuous ||
        static_cast<int>(idle_.size()) >= config_.quanta_wait;
    if (!batch_ready) return;
    while (!idle_.empty() && work_available()) {
      IdleWorker w = idle_.front();
      idle_.pop_front();
      if (!initial) {
        const double eligible =
            stage1_left_ > 0 ? w.idle_since : std::max(w.idle_since, stage2_open_time_);
        waits_.push_back(now - eligible);
      }
      dispatch(w.worker_id, now);
    }
  }

  void dispatch(int worker_id, double now) {
    Evaluation ev;
    ev.worker_id = worker_id;
    TraceEvent& e = ev.event;
    e.worker_id = worker_id;
    e.candidate_id = next_candidate_id_++;

    if (stage1_left_ > 0) {
      --stage1_left_;
      e.stage = 1;
      e.sequence = sample_uniform(spec_, rng_);
    } else {
      --stage2_left_;
      e.stage = 2;
      if (static_cast<int>(population_.size()) != config_.population_size) {
        throw ConfigError("stage-2 sampling saw population size " +
                          std::to_string(population_.size()));
      }
      stats_.sampling_population_min =
          std::min(stats_.sampling_population_min, static_cast<int>(population_.size()));
      stats_.sampling_population_max =
          std::max(stats_.sampling_population_max, static_cast<int>(population_.size()));

      std::vector<int> sampled;
      const PopulationEntry& parent =
          select_parent(population_, config_.sample_size, rng_, &sampled);

      // censored-geometric exposure for the donor-delay expectation
      if (reigning_max_id_ >= 0) {
        const bool present = std::any_of(
            population_.begin(), population_.end(),
            [&](const PopulationEntry& m) { return m.candidate_id == reigning_max_id_; });
        if (present) {
          ++stats_.reign_trials;
          if (parent.candidate_id == reigning_max_id_) ++stats_.reign_selections;
        }
      }

      auto [child, mutated_slot] = mutate(parent.sequence, spec_, rng_);
      e.sequence = std::move(child);
      if (config_.debug_trace) {
        e.mutation_index = mutated_slot;
        e.sampled_ids = std::move(sampled);
      }

      if (config_.transfer_enabled) {
        std::optional<DonorMatch> donor;
        const RepoEntry* parent_entry = repo_.find(parent.candidate_id);
        if (parent_entry && parent_entry->stored) {
          const int plen = transferable_prefix(e.sequence, parent.sequence);
          if (plen >= 1) donor = DonorMatch{parent.candidate_id, plen};
        } else if (config_.population_only_donors) {
          std::vector<int> ids;
          ids.reserve(population_.size());
          for (const auto& m : population_) ids.push_back(m.candidate_id);
          donor = repo_.find_donor_among(e.sequence, ids);
        } else {
          donor = repo_.find_donor(e.sequence);
        }
        if (donor) {
          e.donor_id = donor->candidate_id;
          e.donor_prefix_len = donor->prefix_len;
          repo_.record_donation(donor->candidate_id);
        }
      }
    }

    double q = quality(e.sequence, config_.epochs, spec_);
    if (e.donor_prefix_len && spec_.transfer_bonus_max > 0.0) {
      const double frac = static_cast<double>(*e.donor_prefix_len) / spec_.num_slots;
      q = std::min(1.0, q + spec_.transfer_bonus_max * std::sqrt(frac));
    }
    e.quality = round_sig(q);

    const double duration = config_.duration.draw(rng_);
    e.begin_ts = round_sig(now);
    e.end_ts = round_sig(now + duration);
    ev.end_time = now + duration;
    queue_.push(std::move(ev));
  }

  void complete(const Evaluation& ev) {
    const TraceEvent& e = ev.event;
    // atomic region: retirement + append + trace + repo admission
    if (e.stage == 2) {
      PopulationEntry retired = retire_oldest(population_);
      stats_.retired_insertion_indices.push_back(retired.insertion_index);
    } else {
      ++stage1_completed_;
    }

    PopulationEntry entry;
    entry.candidate_id = e.candidate_id;
    entry.sequence = e.sequence;
    entry.quality = e.quality;
    entry.insertion_index = next_insertion_++;
    population_.push_back(entry);

    if (entry.quality > reigning_max_quality_) {
      reigning_max_quality_ = entry.quality;
      reigning_max_id_ = entry.candidate_id;
    }

    if (config_.transfer_enabled) {
      AdmitContext ctx;
      ctx.population_size = static_cast<int>(population_.size());
      ctx.population_full = ctx.population_size >= config_.population_size;
      ctx.population_rank = 1;
      for (const auto& m : population_) {
        if (m.candidate_id != entry.candidate_id && m.quality < entry.quality) {
          ++ctx.population_rank;
        }
      }
      ctx.recent_donations = 0;  // closed-loop tier policy sees a fresh entry
      RepoEntry re;
      re.candidate_id = entry.candidate_id;
      re.sequence = entry.sequence;
      re.quality = entry.quality;
      repo_.add(std::move(re), config_.admission, ctx);
    }

    events_.push_back(ev.event);
  }

  const SearchConfig& config_;
  const SpaceSpec& spec_;
  Rng rng_;

  std::priority_queue<Evaluation, std::vector<Evaluation>, EvalLater> queue_;
  std::deque<IdleWorker> idle_;
  std::deque<PopulationEntry> population_;
  std::vector<TraceEvent> events_;
  std::vector<double> waits_;
  TransferRepo repo_;
  RunStats stats_;

  int stage1_left_ = 0;
  int stage2_left_ = 0;
  int stage1_completed_ = 0;
  bool stage2_opened_seen_ = false;
  double stage2_open_time_ = 0.0;
  int next_candidate_id_ = 0;
  long next_insertion_ = 0;
  int reigning_max_id_ = -1;
  double reigning_max_quality_ = -1.0;
};

}  // namespace

RunResult run_search(const SearchConfig& config, const SpaceSpec& spec) {
  config.validate();
  spec.validate();
  if (!spec.has_epoch_level(config.epochs)) {
    throw ConfigError("epochs " + std::to_string(config.epochs) + " not in spec epoch_levels");
  }
  Simulation sim(config, spec);
  return sim.run();
}

}  // namespace revosim
