// Command-line front end: every library operation behind one binary with
// stable, line-oriented output. All randomized paths take explicit seeds and
// produce byte-identical output on identical invocations.
//
// Exit codes: 0 success, 1 domain failure (an experiment that ran but did
// not meet its target), 2 input error (bad flags, unparsable files or
// literals, out-of-range parameters).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cbrank/experiments.hpp"
#include "cbrank/family_io.hpp"
#include "cbrank/independence.hpp"
#include "cbrank/ordinal.hpp"
#include "cbrank/rank_tree.hpp"
#include "cbrank/space.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainFailure = 1;
constexpr int kExitInputError = 2;

cbrank::FamilySequence load_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cbrank::Error("cannot open input file: " + path);
  return cbrank::load_families(in);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return std::string(buf);
}

int run_cb(const std::string& literal) {
  cbrank::Space space = cbrank::make_space(literal);
  std::cout << "height: " << cbrank::to_string(cbrank::height(space)) << "\n";
  std::vector<cbrank::Cardinality> seq = cbrank::cardinal_sequence(space);
  for (std::size_t level = 0; level < seq.size(); ++level)
    std::cout << level << " " << cbrank::to_string(seq[level]) << "\n";
  return kExitOk;
}

int run_rank(const std::string& input, bool naive, bool parallel, const std::string& dot_path) {
  cbrank::FamilySequence fs = load_family_file(input);
  std::size_t result = 0;
  if (naive) {
    std::size_t members = 0;
    for (const auto& family : fs.families) members += family.size();
    if (fs.universe_size > 8 || members > 16) {
      std::cerr << "error: --naive limits exceeded: universe <= 8 and at most 16 members total"
                << " (got universe " << fs.universe_size << ", " << members << " members)\n";
      return kExitInputError;
    }
    result = cbrank::rank_naive(fs);
  } else if (parallel) {
    result = cbrank::rank_parallel(fs);
  } else {
    result = cbrank::rank(fs);
  }
  if (!dot_path.empty()) {
    std::ofstream out(dot_path);
    if (!out) throw cbrank::Error("cannot open output file: " + dot_path);
    cbrank::write_dot(fs, out);
  }
  std::cout << "rank: " << result << "\n";
  return kExitOk;
}

int run_mrank(const std::string& input, std::size_t m) {
  cbrank::FamilySequence fs = load_family_file(input);
  std::size_t result = cbrank::mrank(fs, m);
  std::cout << "mrank: " << result << "\n";
  return kExitOk;
}

int run_indep(const std::string& input) {
  cbrank::FamilySequence fs = load_family_file(input);
  cbrank::BitsetOps ops{fs.universe_size};
  std::vector<boost::dynamic_bitset<>> members;
  for (const auto& family : fs.families)
    for (const auto& member : family) members.push_back(member);
  bool ok = cbrank::is_independent(ops, members);
  std::cout << "independent: " << (ok ? "true" : "false") << "\n";
  return kExitOk;
}

int run_lemma4(std::uint32_t k, std::uint64_t per_level, bool json) {
  cbrank::ExperimentReport rep = cbrank::run_bigrank_experiment(k, per_level);
  if (json) {
    std::cout << cbrank::to_json(rep).dump(2) << "\n";
  } else {
    std::cout << "status: " << (rep.pass ? "pass" : "fail") << ", achieved: ≥"
              << rep.achieved_rank << "\n";
    std::cout << "target: " << rep.target << "\n";
    std::cout << "mode: " << rep.mode << "\n";
    std::size_t points = 0;
    for (const auto& pts : rep.level_witnesses) points += pts.size();
    std::cout << "witness_points: " << points << "\n";
    for (std::size_t i = 0; i < rep.chain.size(); ++i)
      std::cout << "level " << (rep.k - 1 - i) << ": " << cbrank::to_string(rep.chain[i])
                << "\n";
    std::cout << "diagnostics: " << rep.diagnostics << "\n";
  }
  return rep.pass ? kExitOk : kExitDomainFailure;
}

int run_lemma4_sweep(std::uint32_t k, std::uint64_t per_level_cap) {
  std::optional<std::uint64_t> found = cbrank::min_passing_per_level(k, per_level_cap);
  if (found) {
    std::cout << "min_per_level: " << *found << "\n";
    return kExitOk;
  }
  std::cout << "min_per_level: none up to " << per_level_cap << "\n";
  return kExitDomainFailure;
}

int run_trace_check(std::uint32_t k, std::uint64_t per_level, std::uint64_t trials,
                    std::uint64_t seed) {
  cbrank::TraceCheckReport rep = cbrank::run_trace_experiment(k, per_level, trials, seed);
  std::cout << "trials: " << rep.trials << "\n";
  std::cout << "hitting_passed: " << rep.hitting_passed << "\n";
  std::cout << "hitting_failed: " << rep.hitting_failed << "\n";
  std::cout << "rank_matches: " << rep.rank_matches << "\n";
  std::cout << "hard_errors: " << rep.hard_errors << "\n";
  std::cout << "status: " << (rep.pass ? "pass" : "fail") << "\n";
  return rep.pass ? kExitOk : kExitDomainFailure;
}

int run_random_exp(std::size_t universe, std::size_t gamma, std::size_t members,
                   std::uint64_t trials, std::uint64_t seed, const std::string& dump_path) {
  cbrank::RandomFamiliesReport rep =
      cbrank::run_random_families(universe, gamma, members, trials, seed);
  std::cout << "trials: " << rep.trials << "\n";
  std::cout << "mean_rank: " << format_double(rep.mean_rank) << "\n";
  std::cout << "min_rank: " << rep.min_rank << "\n";
  std::cout << "max_rank: " << rep.max_rank << "\n";
  std::cout << "histogram:";
  for (std::size_t r = 0; r < rep.rank_histogram.size(); ++r)
    std::cout << " " << r << ":" << rep.rank_histogram[r];
  std::cout << "\n";
  std::cout << "mrank_means:";
  for (std::size_t m = 0; m < rep.mean_mrank.size(); ++m)
    std::cout << " " << m << ":" << format_double(rep.mean_mrank[m]);
  std::cout << "\n";
  if (!dump_path.empty()) {
    std::ofstream out(dump_path);
    if (!out) throw cbrank::Error("cannot open output file: " + dump_path);
    cbrank::save_families(out, rep.last_family);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Workbench for ordinal interval spaces: derivative levels, clopen "
      "algebras, independent families, and rank trees."};
  app.require_subcommand(1);

  auto* cb_cmd = app.add_subcommand("cb", "Print the height and cardinal sequence of [0,lambda]");
  std::string lambda_literal;
  cb_cmd->add_option("--lambda", lambda_literal, "ordinal literal, e.g. \"w^2*3+w+1\"")
      ->required();

  auto* rank_cmd =
      app.add_subcommand("rank", "Rank of the independent-selection tree of a family file");
  std::string rank_input, dot_path;
  bool naive = false;
  bool parallel = false;
  rank_cmd->add_option("--input", rank_input, "family file path")->required();
  rank_cmd->add_flag("--naive", naive, "exhaustive reference evaluator (small inputs only)");
  rank_cmd->add_flag("--parallel", parallel, "evaluate root subtrees concurrently");
  rank_cmd->add_option("--dot", dot_path, "write the explored tree in DOT format to this path");

  auto* mrank_cmd = app.add_subcommand(
      "mrank", "Minimum rank over strictly increasing index subsequences of length m");
  std::string mrank_input;
  std::size_t m = 0;
  mrank_cmd->add_option("--input", mrank_input, "family file path")->required();
  mrank_cmd->add_option("--m", m, "subsequence length")->required();

  auto* indep_cmd =
      app.add_subcommand("indep", "Test independence of the file's members, in file order");
  std::string indep_input;
  indep_cmd->add_option("--input", indep_input, "family file path")->required();

  auto* lemma4_cmd = app.add_subcommand(
      "lemma4", "Grow an independent chain across the levels of [0,w^k] and rank its trace");
  std::uint32_t k = 0;
  std::uint64_t per_level = 0;
  bool json = false;
  bool sweep = false;
  lemma4_cmd->add_option("--k", k, "number of levels, 1..6")->required();
  lemma4_cmd->add_option("--per-level", per_level, "sample points per level (default 2^k+1)");
  lemma4_cmd->add_flag("--json", json, "emit the full report as a JSON document");
  lemma4_cmd->add_flag("--sweep", sweep,
                       "report the smallest per-level count whose chain passes, searching up "
                       "through the --per-level value");

  auto* trace_cmd = app.add_subcommand(
      "trace-check",
      "Compare interval ranks with traced bitset ranks under the cell-hitting precondition");
  std::uint32_t trace_k = 0;
  std::uint64_t trace_per_level = 3;
  std::uint64_t trace_trials = 100;
  std::uint64_t trace_seed = 0;
  trace_cmd->add_option("--k", trace_k, "number of levels, 1..4")->required();
  trace_cmd->add_option("--per-level", trace_per_level, "sample points per level (default 3)");
  trace_cmd->add_option("--trials", trace_trials, "number of randomized trials (default 100)");
  trace_cmd->add_option("--seed", trace_seed, "random seed (default 0)");

  auto* random_cmd =
      app.add_subcommand("random-exp", "Rank statistics over uniform random bitset families");
  std::size_t universe = 0;
  std::size_t gamma = 0;
  std::size_t members = 0;
  std::uint64_t rand_trials = 100;
  std::uint64_t rand_seed = 0;
  std::string dump_path;
  random_cmd->add_option("--universe", universe, "universe size, 0..24")->required();
  random_cmd->add_option("--gamma", gamma, "number of families, 0..8")->required();
  random_cmd->add_option("--members", members, "members per family, 0..16")->required();
  random_cmd->add_option("--trials", rand_trials, "number of trials (default 100)");
  random_cmd->add_option("--seed", rand_seed, "random seed (default 0)");
  random_cmd->add_option("--dump", dump_path, "write the final trial's family file to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the flag error
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (app.got_subcommand(cb_cmd)) return run_cb(lambda_literal);
    if (app.got_subcommand(rank_cmd)) return run_rank(rank_input, naive, parallel, dot_path);
    if (app.got_subcommand(mrank_cmd)) return run_mrank(mrank_input, m);
    if (app.got_subcommand(indep_cmd)) return run_indep(indep_input);
    if (app.got_subcommand(lemma4_cmd)) {
      if (lemma4_cmd->count("--per-level") == 0) per_level = (std::uint64_t{1} << k) + 1;
      if (sweep) return run_lemma4_sweep(k, per_level);
      return run_lemma4(k, per_level, json);
    }
    if (app.got_subcommand(trace_cmd))
      return run_trace_check(trace_k, trace_per_level, trace_trials, trace_seed);
    if (app.got_subcommand(random_cmd))
      return run_random_exp(universe, gamma, members, rand_trials, rand_seed, dump_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
