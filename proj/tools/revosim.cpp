// revosim: run searches, analyze traces, evaluate closed-form expectations,
// and replay traces against cache admission policies.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "revosim/analytics.hpp"
#include "revosim/cache_sim.hpp"
#include "revosim/config.hpp"
#include "revosim/engine.hpp"
#include "revosim/prob.hpp"
#include "revosim/trace.hpp"

namespace fs = std::filesystem;
using namespace revosim;

namespace {

fs::path default_out() {
  if (const char* env = std::getenv("REVOSIM_OUT")) return env;
  return ".";
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
}

std::string format_trace(const std::vector<TraceEvent>& events) {
  std::string out;
  out.reserve(events.size() * 160);
  for (const auto& e : events) {
    out += format_event(e);
    out += '\n';
  }
  return out;
}

int cmd_run(const std::string& space_path, const std::string& search_path,
            std::optional<std::uint64_t> seed, const fs::path& out_dir) {
  const SpaceSpec spec = load_space_spec(space_path);
  SearchConfig cfg = load_search_config(search_path);
  if (seed) cfg.rng_seed = *seed;

  const RunResult result = run_search(cfg, spec);

  ensure_dir(out_dir);
  write_file_atomic(out_dir / "trace.jsonl", format_trace(result.events));
  if (cfg.mode == SchedulingMode::quanta) {
    std::string delays = "mean_wait\n" + std::to_string(result.delay.mean_wait) + "\n";
    write_file_atomic(out_dir / "delays.csv", delays);
  }

  RunManifest m;
  m.command = "run";
  m.space_config = fs::absolute(space_path).string();
  m.search_config = fs::absolute(search_path).string();
  m.trace_file = "trace.jsonl";
  m.seed = cfg.rng_seed;
  m.policy = policy_to_string(cfg.admission);
  write_manifest(out_dir, m);

  std::cout << "wrote " << (out_dir / "trace.jsonl").string() << " (" << result.events.size()
            << " events, seed " << cfg.rng_seed << ")\n";
  if (cfg.mode == SchedulingMode::quanta) {
    std::cout << "mean dispatch wait: " << result.delay.mean_wait << " s\n";
  }
  return 0;
}

int cmd_analyze(const std::string& trace_path, const fs::path& out_dir,
                std::optional<double> trie_theta, int window, int prefix_len, int stride,
                bool tiers, bool quality, bool locality, int locality_top,
                double locality_bucket) {
  const auto events = read_trace(trace_path);
  ensure_dir(out_dir);

  if (trie_theta) {
    const PrefixTrie trie = build_trie(events, *trie_theta);
    write_file_atomic(out_dir / "trie.dot", trie_to_dot(trie));
    std::cout << "trie: " << trie.node_count() << " nodes (threshold " << *trie_theta << ")\n";
  }
  if (window > 0) {
    const auto hists = window_histograms(events, window, prefix_len, stride);
    write_file_atomic(out_dir / "histograms.csv", histograms_to_csv(hists));
    std::cout << "histograms: " << hists.size() << " windows of " << window << "\n";
    if (tiers && !hists.empty()) {
      const auto& last = hists.back();
      write_file_atomic(out_dir / "tiers.csv", tiers_to_csv(last, classify_tiers(last)));
    }
  }
  if (quality) {
    const QualitySeries series = quality_series(events);
    write_file_atomic(out_dir / "quality.csv", quality_series_to_csv(series));
    std::cout << "quality: " << series.steps.size() << " improvement steps, final max "
              << series.cumulative_max.back() << "\n";
  }
  if (locality) {
    const bool any_donor = std::any_of(events.begin(), events.end(),
                                       [](const TraceEvent& e) { return e.donor_id.has_value(); });
    if (!any_donor) {
      throw AnalyticsError("locality needs a transfer-enabled trace (no donor records found)");
    }
    const LocalityReport report = worker_locality(events, locality_top, locality_bucket);
    write_file_atomic(out_dir / "locality.csv", locality_to_csv(report));
    std::cout << "locality: " << report.runs.size() << " same-donor worker runs\n";
  }

  RunManifest m;
  m.command = "analyze";
  m.trace_file = fs::absolute(trace_path).string();
  write_manifest(out_dir, m);
  return 0;
}

int cmd_cache_sim(const std::string& trace_path, const std::string& policy_text,
                  const std::optional<fs::path>& out_dir) {
  const auto events = read_trace(trace_path);
  const CachePolicy policy = parse_policy(policy_text);
  const CacheReport report = replay(events, policy);
  std::cout << "policy: " << policy_to_string(policy) << "\n" << report_summary(report);
  if (out_dir) {
    ensure_dir(*out_dir);
    write_file_atomic(*out_dir / "cache_report.csv", report_to_csv(report));
    RunManifest m;
    m.command = "cache-sim";
    m.trace_file = fs::absolute(trace_path).string();
    m.policy = policy_to_string(policy);
    write_manifest(*out_dir, m);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulator and analysis toolkit for parallel regularized-evolution search"};
  app.require_subcommand(1);

  // run
  std::string space_path, search_path;
  std::optional<std::uint64_t> seed;
  fs::path run_out = default_out();
  auto* run = app.add_subcommand("run", "run a search and write a trace");
  run->add_option("space-config", space_path, "search-space JSON config")->required();
  run->add_option("search-config", search_path, "search JSON config")->required();
  run->add_option("--seed", seed, "override rng_seed from the config");
  run->add_option("--out", run_out, "output directory");

  // analyze
  std::string trace_path;
  fs::path analyze_out = default_out();
  std::optional<double> trie_theta;
  int window = 0, prefix_len = 3, stride = 1;
  bool tiers = false, quality = false, locality = false;
  int locality_top = 10;
  double locality_bucket = 60.0;
  auto* analyze = app.add_subcommand("analyze", "derive artifacts from a trace");
  analyze->add_option("trace", trace_path, "trace file")->required();
  analyze->add_option("--trie", trie_theta, "emit prefix trie DOT, pruning below this fraction");
  analyze->add_option("--window", window, "sliding histogram window size (0 = off)");
  analyze->add_option("--prefix-len", prefix_len, "histogram prefix length");
  analyze->add_option("--stride", stride, "histogram window stride");
  analyze->add_flag("--tiers", tiers, "classify the final window into tiers");
  analyze->add_flag("--quality", quality, "emit quality series CSV");
  analyze->add_flag("--locality", locality, "emit worker-locality report");
  analyze->add_option("--locality-top", locality_top, "number of top donors to track");
  analyze->add_option("--locality-bucket", locality_bucket, "co-occurrence time bucket, seconds");
  analyze->add_option("--out", analyze_out, "output directory");

  // prob
  auto* prob_cmd = app.add_subcommand("prob", "evaluate a closed-form expectation");
  prob_cmd->require_subcommand(1);
  std::uint64_t hN = 0, hK = 0, hn = 0, hk = 0;
  auto* hyper = prob_cmd->add_subcommand("hypergeom", "P(X=k), X ~ H(N, K, n)");
  hyper->add_option("--N", hN)->required();
  hyper->add_option("--K", hK)->required();
  hyper->add_option("--n", hn)->required();
  hyper->add_option("--k", hk)->required();

  std::uint64_t tP = 100, trank = 0, ts = 5;
  auto* tbound = prob_cmd->add_subcommand("transfer-bound", "donation probability upper bound");
  tbound->add_option("--P", tP);
  tbound->add_option("--rank", trank, "population rank, 1 = worst")->required();
  tbound->add_option("--s", ts);

  double bc = 0, bp = 0.5;
  std::uint64_t bk = 0;
  auto* birthday = prob_cmd->add_subcommand("birthday", "k-repetition threshold sample size");
  birthday->add_option("--c", bc, "number of equally likely prefixes")->required();
  birthday->add_option("--k", bk, "repetition count")->required();
  birthday->add_option("--p", bp, "target probability");

  std::uint64_t orr = 0, orw = 25;
  double omu = 0.0, osigma = 1.0;
  auto* ostat = prob_cmd->add_subcommand("order-stat", "expected r-th of w normal order stats");
  ostat->add_option("--r", orr)->required();
  ostat->add_option("--w", orw);
  ostat->add_option("--mu", omu);
  ostat->add_option("--sigma", osigma);

  std::uint64_t dswait = 0, dw = 25;
  double dmu = 60.0, dsigma = 10.0;
  auto* dbound = prob_cmd->add_subcommand("delay-bound", "mean extra wait from quanta batching");
  dbound->add_option("--swait", dswait)->required();
  dbound->add_option("--w", dw);
  dbound->add_option("--mu", dmu);
  dbound->add_option("--sigma", dsigma);

  std::uint64_t eP = 100, es = 5;
  auto* evals = prob_cmd->add_subcommand("evals-until-donor",
                                         "expected evaluations until the max is sampled");
  evals->add_option("--P", eP);
  evals->add_option("--s", es);

  // cache-sim
  std::string cs_trace, cs_policy = "store-all";
  std::optional<fs::path> cs_out;
  auto* cache = app.add_subcommand("cache-sim", "replay a trace against an admission policy");
  cache->add_option("trace", cs_trace, "trace file")->required();
  cache->add_option("--policy", cs_policy,
                    "store-all | skip-bottom | prob:<eps> | tier:<min>:<window> [@capacity]");
  cache->add_option("--out", cs_out, "output directory for CSV report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(space_path, search_path, seed, run_out);
    if (*analyze) {
      return cmd_analyze(trace_path, analyze_out, trie_theta, window, prefix_len, stride, tiers,
                         quality, locality, locality_top, locality_bucket);
    }
    if (*cache) return cmd_cache_sim(cs_trace, cs_policy, cs_out);
    if (*prob_cmd) {
      double value = 0.0;
      if (*hyper) value = prob::hypergeom_pmf({hN, hK, hn}, hk);
      if (*tbound) value = prob::transfer_prob_bound(tP, trank, ts);
      if (*birthday) value = prob::birthday_threshold(bc, bk, bp);
      if (*ostat) value = omu + osigma * prob::normal_order_stat(orr, orw);
      if (*dbound) value = prob::quanta_delay_bound(dswait, dw, dmu, dsigma);
      if (*evals) value = prob::expected_evals_until_donor(eP, es);
      std::printf("%.9g\n", value);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
