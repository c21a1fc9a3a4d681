#include "revosim/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

namespace revosim {

namespace {

long count_nodes(const TrieNode& node) {
  long n = 1;
  for (const auto& [_, child] : node.children) n += count_nodes(*child);
  return n;
}

void prune(TrieNode& node, double threshold) {
  for (auto it = node.children.begin(); it != node.children.end();) {
    if (it->second->occurrence_fraction < threshold) {
      it = node.children.erase(it);
    } else {
      prune(*it->second, threshold);
      ++it;
    }
  }
}

void set_fractions(TrieNode& node, long total) {
  node.occurrence_fraction =
      total > 0 ? static_cast<double>(node.occurrence_count) / static_cast<double>(total) : 0.0;
  for (auto& [_, child] : node.children) set_fractions(*child, total);
}

}  // namespace

long PrefixTrie::node_count() const { return root ? count_nodes(*root) : 0; }

PrefixTrie build_trie(const std::vector<TraceEvent>& events, double prune_threshold,
                      std::optional<int> depth_limit) {
  if (events.empty()) throw AnalyticsError("build_trie: no events");
  if (prune_threshold < 0.0 || prune_threshold >= 1.0) {
    throw AnalyticsError("build_trie: prune threshold must lie in [0, 1)");
  }
  PrefixTrie trie;
  trie.root = std::make_unique<TrieNode>();
  trie.total_sequences = static_cast<long>(events.size());
  trie.prune_threshold = prune_threshold;
  trie.root->occurrence_count = trie.total_sequences;

  // donor sequences by candidate id, for transfer annotation
  std::unordered_map<int, const ArchSequence*> sequences;
  for (const auto& e : events) sequences[e.candidate_id] = &e.sequence;

  auto walk = [&](const ArchSequence& seq, bool count_occurrence) {
    TrieNode* node = trie.root.get();
    const int max_depth = depth_limit ? std::min(*depth_limit, seq.size()) : seq.size();
    for (int d = 0; d < max_depth; ++d) {
      auto& child = node->children[seq.choices[d]];
      if (!child) {
        child = std::make_unique<TrieNode>();
        child->slot_depth = d + 1;
        child->choice_value = seq.choices[d];
      }
      node = child.get();
      if (count_occurrence) ++node->occurrence_count;
      else ++node->transfer_count;
    }
  };

  for (const auto& e : events) walk(e.sequence, true);
  for (const auto& e : events) {
    if (e.donor_id) {
      auto it = sequences.find(*e.donor_id);
      if (it != sequences.end()) walk(*it->second, false);
    }
  }

  set_fractions(*trie.root, trie.total_sequences);
  prune(*trie.root, prune_threshold);
  return trie;
}

namespace {

void dot_node(std::ostringstream& out, const TrieNode& node, int id, int& next_id) {
  if (node.choice_value >= 0) {
    // hue 0 (red) for fraction 1 down to 2/3 (blue) for fraction 0
    const double hue = (1.0 - node.occurrence_fraction) * 2.0 / 3.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "  n%d [label=\"%d (%.1f%%)\" style=filled fillcolor=\"%.4f 0.6 1.0\" "
                  "transfers=%ld];\n",
                  id, node.choice_value, node.occurrence_fraction * 100.0, hue,
                  node.transfer_count);
    out << buf;
  } else {
    out << "  n" << id << " [label=\"root\" shape=box];\n";
  }
  for (const auto& [_, child] : node.children) {
    const int cid = next_id++;
    dot_node(out, *child, cid, next_id);
    out << "  n" << id << " -> n" << cid << ";\n";
  }
}

}  // namespace

std::string trie_to_dot(const PrefixTrie& trie) {
  std::ostringstream out;
  out << "digraph prefix_trie {\n  rankdir=LR;\n";
  int next_id = 1;
  dot_node(out, *trie.root, 0, next_id);
  out << "}\n";
  return out.str();
}

std::vector<WindowHistogram> window_histograms(const std::vector<TraceEvent>& events,
                                               int window_size, int prefix_len, int stride) {
  const int n = static_cast<int>(events.size());
  if (window_size < 1 || window_size > n) {
    throw AnalyticsError("window_histograms: window size must lie in [1, event count]");
  }
  if (prefix_len < 1) throw AnalyticsError("window_histograms: prefix_len must be >= 1");
  if (stride < 1) throw AnalyticsError("window_histograms: stride must be >= 1");

  std::vector<WindowHistogram> out;
  for (int end = window_size; end <= n; end += stride) {
    WindowHistogram h;
    h.window_end_index = end;
    h.prefix_len = prefix_len;
    h.window_size = window_size;
    for (int i = end - window_size; i < end; ++i) {
      const auto& seq = events[i].sequence.choices;
      if (static_cast<int>(seq.size()) < prefix_len) {
        throw AnalyticsError("window_histograms: sequence shorter than prefix_len");
      }
      std::vector<int> prefix(seq.begin(), seq.begin() + prefix_len);
      ++h.counts[std::move(prefix)];
    }
    out.push_back(std::move(h));
  }
  return out;
}

TierReport classify_tiers(const WindowHistogram& histogram, double t1_frac, int t2_max_count,
                          int t3_max_count) {
  TierReport report;
  report.t1_frac = t1_frac;
  report.t2_max_count = t2_max_count;
  report.t3_max_count = t3_max_count;
  const double t1_count = t1_frac * histogram.window_size;
  for (const auto& [prefix, count] : histogram.counts) {
    int tier;
    if (count >= t1_count) tier = 1;
    else if (count <= t3_max_count) tier = 3;
    else tier = 2;
    report.tiers[prefix] = tier;
  }
  return report;
}

QualitySeries quality_series(const std::vector<TraceEvent>& events) {
  QualitySeries s;
  s.quality.reserve(events.size());
  s.cumulative_max.reserve(events.size());
  double max = -1.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const double q = events[i].quality;
    s.quality.push_back(q);
    if (q > max) {
      s.steps.push_back({static_cast<int>(i), max, q});
      max = q;
    }
    s.cumulative_max.push_back(max);
  }
  return s;
}

std::vector<DonorWindowCounts> donor_frequency(const std::vector<TraceEvent>& events,
                                               int window_size) {
  const int n = static_cast<int>(events.size());
  if (window_size < 1 || window_size > n) {
    throw AnalyticsError("donor_frequency: window size must lie in [1, event count]");
  }
  bool any_donor_field = std::any_of(events.begin(), events.end(), [](const TraceEvent& e) {
    return e.stage == 2 && (e.donor_id || e.donor_prefix_len);
  });
  bool any_stage2 = std::any_of(events.begin(), events.end(),
                                [](const TraceEvent& e) { return e.stage == 2; });
  if (any_stage2 && !any_donor_field) {
    throw AnalyticsError("donor_frequency: trace lacks donor fields (transfer disabled?)");
  }
  std::vector<DonorWindowCounts> out;
  for (int end = window_size; end <= n; ++end) {
    DonorWindowCounts w;
    w.window_end_index = end;
    for (int i = end - window_size; i < end; ++i) {
      if (events[i].donor_id) ++w.counts[*events[i].donor_id];
    }
    out.push_back(std::move(w));
  }
  return out;
}

LocalityReport worker_locality(const std::vector<TraceEvent>& events, int top_k,
                               double time_bucket, bool exclude_top) {
  if (top_k < 1) throw AnalyticsError("worker_locality: top_k must be >= 1");
  if (!(time_bucket > 0.0)) throw AnalyticsError("worker_locality: time bucket must be positive");

  std::map<int, long> donor_totals;
  for (const auto& e : events) {
    if (e.donor_id) ++donor_totals[*e.donor_id];
  }
  std::vector<std::pair<int, long>> ranked(donor_totals.begin(), donor_totals.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  LocalityReport report;
  std::size_t start = exclude_top && !ranked.empty() ? 1 : 0;
  for (std::size_t i = start; i < ranked.size() && report.top_donors.size() < std::size_t(top_k);
       ++i) {
    report.top_donors.push_back(ranked[i].first);
  }

  auto tracked = [&](int donor) {
    return std::find(report.top_donors.begin(), report.top_donors.end(), donor) !=
           report.top_donors.end();
  };

  // per-worker consecutive-use runs, in end_ts (file) order; any event on the
  // worker with a different (or no) donor ends the run
  std::map<int, std::pair<int, int>> current;  // worker -> (donor, run length)
  auto close_run = [&](int worker) {
    auto it = current.find(worker);
    if (it != current.end()) {
      if (tracked(it->second.first)) {
        report.runs.push_back({worker, it->second.first, it->second.second});
      }
      current.erase(it);
    }
  };
  for (const auto& e : events) {
    const int donor = e.donor_id.value_or(-1);
    auto it = current.find(e.worker_id);
    if (it != current.end() && it->second.first == donor) {
      ++it->second.second;
    } else {
      close_run(e.worker_id);
      if (donor >= 0) current[e.worker_id] = {donor, 1};
    }
  }
  for (auto it = current.begin(); it != current.end();) {
    const int worker = it->first;
    ++it;
    close_run(worker);
  }

  // cross-worker co-occurrence within begin_ts buckets
  std::map<std::pair<int, int>, std::map<int, bool>> bucket_workers;
  for (const auto& e : events) {
    if (!e.donor_id || !tracked(*e.donor_id)) continue;
    const int bucket = static_cast<int>(std::floor(e.begin_ts / time_bucket));
    bucket_workers[{bucket, *e.donor_id}][e.worker_id] = true;
  }
  for (const auto& [key, workers] : bucket_workers) {
    report.co_occurrence.push_back({key.first, key.second, static_cast<int>(workers.size())});
  }
  return report;
}

std::string histograms_to_csv(const std::vector<WindowHistogram>& histograms) {
  std::ostringstream out;
  out << "window_end_index,prefix_id,prefix,count\n";
  // lexicographic prefix ids, stable across all windows of the trace
  std::map<std::vector<int>, int> ids;
  for (const auto& h : histograms) {
    for (const auto& [prefix, _] : h.counts) ids.emplace(prefix, 0);
  }
  int next = 0;
  for (auto& [_, id] : ids) id = next++;
  for (const auto& h : histograms) {
    for (const auto& [prefix, count] : h.counts) {
      out << h.window_end_index << ',' << ids[prefix] << ',';
      for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (i) out << '-';
        out << prefix[i];
      }
      out << ',' << count << '\n';
    }
  }
  return out.str();
}

std::string tiers_to_csv(const WindowHistogram& histogram, const TierReport& report) {
  std::ostringstream out;
  out << "window_end_index,prefix,count,tier\n";
  for (const auto& [prefix, count] : histogram.counts) {
    out << histogram.window_end_index << ',';
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if (i) out << '-';
      out << prefix[i];
    }
    out << ',' << count << ',' << report.tiers.at(prefix) << '\n';
  }
  return out.str();
}

std::string quality_series_to_csv(const QualitySeries& series) {
  std::ostringstream out;
  out << "event_index,quality,cumulative_max,is_step\n";
  std::size_t step = 0;
  for (std::size_t i = 0; i < series.quality.size(); ++i) {
    const bool is_step =
        step < series.steps.size() && series.steps[step].event_index == static_cast<int>(i);
    if (is_step) ++step;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g,%d\n", i, series.quality[i],
                  series.cumulative_max[i], is_step ? 1 : 0);
    out << buf;
  }
  return out.str();
}

std::string locality_to_csv(const LocalityReport& report) {
  std::ostringstream out;
  out << "record,worker_id,donor_id,value\n";
  for (const auto& r : report.runs) {
    out << "run," << r.worker_id << ',' << r.donor_id << ',' << r.length << '\n';
  }
  for (const auto& c : report.co_occurrence) {
    out << "bucket:" << c.bucket << ",," << c.donor_id << ',' << c.distinct_workers << '\n';
  }
  return out.str();
}

}  // namespace revosim
