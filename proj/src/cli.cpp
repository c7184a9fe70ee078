#include "arbor/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "arbor/analysis.hpp"
#include "arbor/generators.hpp"
#include "arbor/greedy.hpp"
#include "arbor/oracle.hpp"

namespace arbor::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << content;
  if (!file) throw UsageError("failed writing '" + path + "'");
}

// Output paths must point into an existing directory.
const CLI::Validator kWritablePath(
    [](std::string& path) -> std::string {
      const auto parent = std::filesystem::path(path).parent_path();
      if (!parent.empty() && !std::filesystem::is_directory(parent)) {
        return "directory '" + parent.string() + "' does not exist";
      }
      return {};
    },
    "PATH");

void emit(std::ostream& out, const std::optional<std::string>& path, const std::string& content) {
  if (path) {
    write_file(*path, content);
  } else {
    out << content;
  }
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct GenOptions {
  std::string pattern;
  int n = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
};

int cmd_gen(const GenOptions& o, std::ostream& out) {
  const auto pattern = parse_pattern(o.pattern);
  if (!pattern) throw UsageError("unknown pattern '" + o.pattern + "'");
  Instance inst = [&] {
    try {
      return generate({*pattern, o.n, o.seed});
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  emit(out, o.out, format_instance(inst));
  return kSuccess;
}

struct RunOptions {
  std::string input;
  std::optional<std::string> trace_out;
  std::optional<std::string> stats_out;
};

int cmd_run(const RunOptions& o, std::ostream& out) {
  const Instance inst = read_instance_file(o.input);
  const GreedyTrace trace = run(inst);
  if (o.trace_out) write_file(*o.trace_out, trace_to_json(trace));
  if (o.stats_out) write_file(*o.stats_out, trace_to_csv(trace));
  out << added_count(trace) << '\n';
  return kSuccess;
}

struct OracleOptions {
  std::string input;
  std::optional<int> max_size;
  std::int64_t node_budget = kDefaultNodeBudget;
  std::optional<std::string> out;
};

int cmd_oracle(const OracleOptions& o, std::ostream& out) {
  const Instance inst = read_instance_file(o.input);
  if (inst.n() > kOracleMaxN) {
    throw UsageError("the exact oracle handles n <= " + std::to_string(kOracleMaxN));
  }
  if (o.max_size && *o.max_size < 0) throw UsageError("--max-size must be non-negative");
  if (o.node_budget <= 0) throw UsageError("--node-budget must be positive");
  const OracleResult result =
      min_arb(inst, o.max_size.value_or(default_size_limit(inst.n())), o.node_budget);
  const std::string json = oracle_result_to_json(inst, result);
  if (o.out) {
    write_file(*o.out, json);
    out << result.size << ' ' << status_name(result.status) << '\n';
  } else {
    out << json;
  }
  return kSuccess;
}

struct VerifyOptions {
  std::string input;
  std::string lemmas = "all";
  std::string partitions = "dyadic";
  std::optional<std::string> report;
};

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  unsigned lemmas = 0;
  try {
    lemmas = analysis::parse_lemma_set(o.lemmas);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  analysis::PartitionScheme scheme;
  if (o.partitions == "dyadic") {
    scheme = analysis::PartitionScheme::dyadic;
  } else if (o.partitions == "all_halves") {
    scheme = analysis::PartitionScheme::all_halves;
  } else {
    throw UsageError("--partitions must be dyadic or all_halves");
  }

  const Instance inst = read_instance_file(o.input);
  const GreedyTrace trace = run(inst);
  const analysis::Verification v = analysis::verify_trace(trace, scheme, lemmas);
  if (o.report) write_file(*o.report, analysis::verification_to_json(v, scheme, lemmas));

  const bool ok = v.hard_checks_hold();
  out << (ok ? "ok" : "FAILED") << " n=" << v.n << " added=" << v.added
      << " partitions=" << v.reports.size() << '\n';
  if (!ok) {
    err << "hard check failed for instance " << v.instance_hash << ": " << v.first_failure()
        << '\n';
    return kVerificationFailed;
  }
  return kSuccess;
}

struct ScaleOptions {
  std::vector<int> sizes;
  std::uint64_t seed = 1;
  int samples = 10;
  std::string pattern = "random";
  std::optional<std::string> input;
  std::optional<std::string> out;
};

int cmd_scale(const ScaleOptions& o, std::ostream& out, std::ostream& err) {
  struct Job {
    Instance inst;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  if (o.input) {
    jobs.push_back({read_instance_file(*o.input), 0});
  } else {
    const auto pattern = parse_pattern(o.pattern);
    if (!pattern) throw UsageError("unknown pattern '" + o.pattern + "'");
    if (o.sizes.empty()) throw UsageError("scale needs --n or --input");
    if (o.samples < 1) throw UsageError("--samples must be positive");
    const int per_size = *pattern == Pattern::random ? o.samples : 1;
    for (const int n : o.sizes) {
      for (int s = 0; s < per_size; ++s) {
        const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(s);
        try {
          jobs.push_back({generate({*pattern, n, seed}), seed});
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }
    }
  }

  std::ostringstream csv;
  csv << "n,seed,added,bound,ratio\n";
  bool within = true;
  for (const Job& job : jobs) {
    const int n = job.inst.n();
    const std::int64_t added = added_count(run(job.inst));
    const std::int64_t bound = analysis::global_bound(n);
    const double scale = n >= 2 ? n * std::log2(static_cast<double>(n)) : 0.0;
    csv << n << ',' << job.seed << ',' << added << ',' << bound << ','
        << fixed6(scale > 0 ? added / scale : 0.0) << '\n';
    if (added > bound) {
      within = false;
      err << "bound violated: n=" << n << " seed=" << job.seed << " added=" << added << " > "
          << bound << '\n';
    }
  }
  emit(out, o.out, csv.str());
  return within ? kSuccess : kVerificationFailed;
}

struct RatioOptions {
  int n = 0;
  std::string mode = "exhaustive";
  int samples = 100;
  std::uint64_t seed = 1;
  std::optional<int> max_size;
  std::int64_t node_budget = kDefaultNodeBudget;
  bool allow_large = false;
  std::optional<std::string> out;
};

int cmd_ratio(const RatioOptions& o, std::ostream& out) {
  if (o.n < 1) throw UsageError("--n must be at least 1");
  if (o.n > kOracleMaxN) {
    throw UsageError("the exact oracle handles n <= " + std::to_string(kOracleMaxN));
  }
  if (o.node_budget <= 0) throw UsageError("--node-budget must be positive");
  std::vector<Instance> instances;
  if (o.mode == "exhaustive") {
    if (o.n > 6 && !o.allow_large) {
      throw UsageError("exhaustive mode is limited to n <= 6; pass --allow-large to override");
    }
    instances = enumerate_permutations(o.n);
  } else if (o.mode == "sample") {
    if (o.samples < 1) throw UsageError("--samples must be positive");
    for (int s = 0; s < o.samples; ++s) {
      instances.push_back(generate({Pattern::random, o.n, o.seed + static_cast<std::uint64_t>(s)}));
    }
  } else {
    throw UsageError("--mode must be exhaustive or sample");
  }

  const RatioTable table = ratio_report(instances, o.max_size.value_or(-1), o.node_budget);
  std::string csv = ratio_table_to_csv(table);
  const std::string summary = "max_ratio=" + fixed6(table.max_ratio) +
                              " mean_ratio=" + fixed6(table.mean_ratio) +
                              " exact=" + std::to_string(table.exact_rows) + "/" +
                              std::to_string(table.rows.size());
  csv += "# " + summary + "\n";
  if (o.out) {
    write_file(*o.out, csv);
    out << summary << '\n';
  } else {
    out << csv;
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GreedyArb sweeps, exact minimum augmentation and bound verification", "arbor"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a generated instance");
  gen_cmd->add_option("--pattern", gen.pattern,
                      "sequential, reverse, random, bit_reversal or zigzag")
      ->required();
  gen_cmd->add_option("--n", gen.n, "Number of keys")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed for the random pattern");
  gen_cmd->add_option("--out,-o", gen.out, "Output file (default: stdout)")->check(kWritablePath);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run GreedyArb and print the added count");
  run_cmd->add_option("--input,-i", run_opts.input, "Instance file")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--trace-out", run_opts.trace_out, "Trace JSON output")
      ->check(kWritablePath);
  run_cmd->add_option("--stats-out", run_opts.stats_out, "Per-step CSV output")
      ->check(kWritablePath);

  OracleOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact minimum augmentation (n <= 8)");
  oracle_cmd->add_option("--input,-i", oracle.input, "Instance file")
      ->required()
      ->check(CLI::ExistingFile);
  oracle_cmd->add_option("--max-size", oracle.max_size, "Largest added-set size to try");
  oracle_cmd->add_option("--node-budget", oracle.node_budget, "Search node budget");
  oracle_cmd->add_option("--out,-o", oracle.out, "Result JSON (default: stdout)")
      ->check(kWritablePath);

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check the partition inequalities on a trace");
  verify_cmd->add_option("--input,-i", verify.input, "Instance file")
      ->required()
      ->check(CLI::ExistingFile);
  verify_cmd->add_option("--lemmas", verify.lemmas, "all, or a comma-separated list");
  verify_cmd->add_option("--partitions", verify.partitions, "dyadic or all_halves");
  verify_cmd->add_option("--report", verify.report, "Report JSON output")->check(kWritablePath);

  ScaleOptions scale;
  auto* scale_cmd = app.add_subcommand("scale", "Added-count growth against 7 n ceil(log2 n)");
  scale_cmd->add_option("--n", scale.sizes, "Instance sizes")->delimiter(',');
  scale_cmd->add_option("--seed", scale.seed, "First seed");
  scale_cmd->add_option("--samples", scale.samples, "Seeds per size");
  scale_cmd->add_option("--pattern", scale.pattern, "Generator pattern");
  scale_cmd->add_option("--input,-i", scale.input, "Use this fixed instance instead")
      ->check(CLI::ExistingFile);
  scale_cmd->add_option("--out,-o", scale.out, "CSV output (default: stdout)")
      ->check(kWritablePath);

  RatioOptions ratio;
  auto* ratio_cmd = app.add_subcommand("ratio", "GreedyArb against the exact optimum");
  ratio_cmd->add_option("--n", ratio.n, "Number of keys")->required();
  ratio_cmd->add_option("--mode", ratio.mode, "exhaustive or sample");
  ratio_cmd->add_option("--samples", ratio.samples, "Random instances in sample mode");
  ratio_cmd->add_option("--seed", ratio.seed, "First seed in sample mode");
  ratio_cmd->add_option("--max-size", ratio.max_size, "Largest added-set size to try");
  ratio_cmd->add_option("--node-budget", ratio.node_budget, "Search node budget per instance");
  ratio_cmd->add_flag("--allow-large", ratio.allow_large, "Permit exhaustive runs above n = 6");
  ratio_cmd->add_option("--out,-o", ratio.out, "CSV output (default: stdout)")
      ->check(kWritablePath);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kSuccess;
    }
    err << "arbor: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*run_cmd) return cmd_run(run_opts, out);
    if (*oracle_cmd) return cmd_oracle(oracle, out);
    if (*verify_cmd) return cmd_verify(verify, out, err);
    if (*scale_cmd) return cmd_scale(scale, out, err);
    if (*ratio_cmd) return cmd_ratio(ratio, out);
  } catch (const InputError& e) {
    err << "arbor: " << e.what() << '\n';
    return kUsageError;
  } catch (const UsageError& e) {
    err << "arbor: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace arbor::cli
