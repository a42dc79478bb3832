#pragma once

// Command-line front end: instance generation, solving, benchmarking and
// paired comparison. Kept header-only so tests can drive it in-process.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hcsp/hcsp.hpp"

namespace hcsp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;

/// Usage problems detected after CLI11 parsing (bad paths, bad enums).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Json, Csv };

struct OutputOptions {
  std::string out = "";
  std::string format = "json";

  // `--out json|csv` picks the format; any other value is an output path.
  Format resolved_format() const {
    const std::string& f = (out == "json" || out == "csv") ? out : format;
    if (f == "json") return Format::Json;
    if (f == "csv") return Format::Csv;
    throw UsageError("unknown format '" + f + "' (expected json or csv)");
  }
  std::optional<std::string> path() const {
    if (out.empty() || out == "json" || out == "csv") return std::nullopt;
    return out;
  }
};

struct InstanceOptions {
  std::vector<std::string> files;
  std::optional<std::size_t> tasks;
  std::optional<std::size_t> procs;
};

struct SolveOptions {
  std::optional<double> time;
  std::optional<std::uint64_t> iters;
  std::uint64_t seed = 0;
  int max_swaps = 9;
  std::string construct = "minmin";
  std::optional<std::size_t> best_of;  // solve: 1, bench: 16
  std::optional<std::size_t> reps;     // bench: 50
  std::optional<unsigned> threads;
  bool exact = false;
};

inline std::string instance_name(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

inline EtcMatrix load_instance_file(const std::string& path, const InstanceOptions& opts) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open instance file '" + path + "'");
  if (opts.tasks || opts.procs) {
    return parse_instance(in, opts.tasks.value_or(kBraunTasks), opts.procs.value_or(kBraunProcs));
  }
  return load_instance(in);
}

inline Constructor parse_constructor(const std::string& name) {
  if (name == "minmin") return Constructor::MinMin;
  if (name == "minmax-extension") return Constructor::MakespanExtension;
  if (name == "random") return Constructor::Random;
  throw UsageError("unknown constructor '" + name + "'");
}

inline SolverConfig make_config(const SolveOptions& o) {
  if (o.max_swaps < 1) throw UsageError("--max-swaps must be at least 1");
  SolverConfig c;
  c.max_iterations = o.iters;
  c.time_budget = std::chrono::duration<double>(o.time.value_or(90.0));
  if (c.time_budget.count() < 0) throw UsageError("--time must be non-negative");
  c.search.max_shake_swaps = o.max_swaps;
  c.search.rng_seed = o.seed;
  c.constructor = parse_constructor(o.construct);
  return c;
}

/// Writes to the --out path when one was given, otherwise to `out`.
inline void emit(const OutputOptions& o, std::ostream& out, const std::string& text) {
  if (auto path = o.path()) {
    std::ofstream file(*path);
    if (!file) throw UsageError("cannot write '" + *path + "'");
    file << text;
  } else {
    out << text;
  }
}

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

inline nlohmann::json schedule_json(const Schedule& s) {
  return {{"assignment", std::vector<ProcId>(s.assignment().begin(), s.assignment().end())},
          {"makespan", s.makespan()}};
}

inline std::string run_solve(const InstanceOptions& io, const SolveOptions& so, const OutputOptions& oo) {
  if (io.files.size() != 1) throw UsageError("solve takes exactly one --instance");
  const std::string& file = io.files.front();
  const auto instance = load_instance_file(file, io);
  const std::string name = instance_name(file);
  const Format format = oo.resolved_format();

  if (so.exact) {
    const auto exact = brute_force_optimum(instance);
    braun::check_lower_bound(name, exact.makespan);
    if (format == Format::Csv) {
      return "instance,best_makespan,exact\n" + name + "," + nlohmann::json(exact.makespan).dump() + ",true\n";
    }
    nlohmann::json j{{"instance", name},
                     {"best_makespan", exact.makespan},
                     {"exact", true},
                     {"schedule", {{"assignment", exact.assignment}, {"makespan", exact.makespan}}}};
    return j.dump() + "\n";
  }

  const SolverConfig config = make_config(so);
  const unsigned threads = so.threads.value_or(default_thread_count());
  const RunResult r = best_of_k(instance, config, so.best_of.value_or(1), so.seed, threads);
  braun::check_lower_bound(name, r.best_makespan);

  const bool by_iterations = config.max_iterations.has_value();
  if (format == Format::Csv) {
    std::ostringstream csv;
    csv << "instance,best_makespan,iterations,seed\n"
        << name << ',' << nlohmann::json(r.best_makespan).dump() << ',' << r.iterations << ',' << r.seed << '\n';
    return csv.str();
  }
  // Trace time is the iteration index under an iteration budget so output
  // stays byte-identical between runs; elapsed seconds otherwise.
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& pt : r.trace) {
    if (by_iterations) {
      trace.push_back({pt.iteration, pt.makespan});
    } else {
      trace.push_back({pt.elapsed_seconds, pt.makespan});
    }
  }
  nlohmann::json j{{"instance", name},
                   {"best_makespan", r.best_makespan},
                   {"iterations", r.iterations},
                   {"seed", r.seed},
                   {"trace_clock", by_iterations ? "iterations" : "seconds"},
                   {"trace", trace},
                   {"schedule", schedule_json(r.best_schedule)}};
  return j.dump() + "\n";
}

inline std::string run_generate(const std::string& cls_name, std::size_t tasks, std::size_t procs,
                                std::uint64_t seed) {
  auto cls = parse_instance_class(cls_name);
  if (!cls) throw UsageError("unknown instance class '" + cls_name + "' (expected e.g. u_c_hihi)");
  return serialize_instance(generate_instance(*cls, tasks, procs, seed));
}

inline std::string run_bench(const InstanceOptions& io, const SolveOptions& so, const OutputOptions& oo) {
  if (io.files.empty()) throw UsageError("bench needs at least one --instance");
  const Format format = oo.resolved_format();
  const SolverConfig config = make_config(so);
  const unsigned threads = so.threads.value_or(default_thread_count());

  std::vector<EtcMatrix> instances;
  for (const auto& f : io.files) instances.push_back(load_instance_file(f, io));
  const auto rows = benchmark(instances, config, so.best_of.value_or(16), so.reps.value_or(50), so.seed, threads);

  std::ostringstream csv;
  csv << "instance,mean,cv_percent\n";
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string name = instance_name(io.files[i]);
    for (double v : rows[i].best_makespans) braun::check_lower_bound(name, v);
    const Summary& s = rows[i].summary;
    csv << name << ',' << fixed(s.mean, 1) << ',' << format_percent(s.cv_percent) << '\n';
    nlohmann::json row{{"instance", name},
                       {"mean", s.mean},
                       {"stddev", s.stddev},
                       {"cv_percent", s.cv_percent},
                       {"best_makespans", rows[i].best_makespans}};
    if (auto lb = braun::lower_bound_for(name)) {
      row["lower_bound"] = *lb;
      row["gap_to_lb_percent"] = gap_to_lower_bound(s.mean, *lb);
    }
    j.push_back(std::move(row));
  }
  return format == Format::Csv ? csv.str() : j.dump() + "\n";
}

struct LabeledValues {
  std::vector<std::string> labels;
  std::vector<double> values;
};

/// `instance,makespan` rows; a first row whose value is not numeric is a header.
inline LabeledValues read_result_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  LabeledValues out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::MalformedNumber, path + ":" + std::to_string(line_no) + ": expected instance,makespan");
    }
    std::string label = line.substr(0, comma);
    std::string value = line.substr(comma + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t") + 1);
    try {
      out.values.push_back(detail::parse_cost_token(value));
    } catch (const Error&) {
      if (out.values.empty() && out.labels.empty()) continue;  // header
      throw Error(ErrorKind::MalformedNumber, path + ":" + std::to_string(line_no) + ": bad makespan '" + value + "'");
    }
    out.labels.push_back(std::move(label));
  }
  return out;
}

/// Pairs the n-th occurrence of a label in `a` with the n-th occurrence in
/// `b`, so per-instance means and repeated per-run rows both work.
inline PairedSamples pair_by_label(const LabeledValues& a, const LabeledValues& b) {
  std::map<std::string, std::vector<double>> b_values;
  for (std::size_t i = 0; i < b.labels.size(); ++i) b_values[b.labels[i]].push_back(b.values[i]);
  std::map<std::string, std::size_t> used;
  PairedSamples s;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    auto it = b_values.find(a.labels[i]);
    const std::size_t k = used[a.labels[i]]++;
    if (it == b_values.end() || k >= it->second.size()) {
      throw Error(ErrorKind::DimensionMismatch, "no matching row for '" + a.labels[i] + "' in second file");
    }
    s.labels.push_back(a.labels[i]);
    s.a.push_back(a.values[i]);
    s.b.push_back(it->second[k]);
  }
  if (s.a.size() != b.labels.size()) {
    throw Error(ErrorKind::DimensionMismatch, "second file has rows with no match in the first");
  }
  return s;
}

inline std::string run_compare(const std::vector<std::string>& files, const OutputOptions& oo) {
  if (files.size() != 2) throw UsageError("compare --wilcoxon needs exactly two CSV files");
  const Format format = oo.resolved_format();
  const auto samples = pair_by_label(read_result_csv(files[0]), read_result_csv(files[1]));
  const auto w = wilcoxon_signed_rank(samples);

  if (format == Format::Csv) {
    std::ostringstream csv;
    csv << "w_plus,w_minus,n,n_dropped,p_two_sided,exact\n"
        << nlohmann::json(w.w_plus).dump() << ',' << nlohmann::json(w.w_minus).dump() << ',' << w.n_effective
        << ',' << w.n_dropped << ',' << nlohmann::json(w.p_two_sided).dump() << ','
        << (w.exact ? "true" : "false") << "\n\ninstance,a,b,difference\n";
    for (std::size_t i = 0; i < samples.a.size(); ++i) {
      csv << samples.labels[i] << ',' << nlohmann::json(samples.a[i]).dump() << ','
          << nlohmann::json(samples.b[i]).dump() << ',' << nlohmann::json(samples.a[i] - samples.b[i]).dump()
          << '\n';
    }
    return csv.str();
  }
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < samples.a.size(); ++i) {
    pairs.push_back({{"instance", samples.labels[i]},
                     {"a", samples.a[i]},
                     {"b", samples.b[i]},
                     {"difference", samples.a[i] - samples.b[i]}});
  }
  nlohmann::json j{{"w_plus", w.w_plus},   {"w_minus", w.w_minus},         {"n", w.n_effective},
                   {"n_dropped", w.n_dropped}, {"p_two_sided", w.p_two_sided}, {"exact", w.exact},
                   {"pairs", pairs}};
  return j.dump() + "\n";
}

inline void add_instance_options(CLI::App& cmd, InstanceOptions& io) {
  cmd.add_option("--instance,instances", io.files, "Instance file(s)");
  cmd.add_option("--tasks", io.tasks, "Task count for headerless files (default 512)");
  cmd.add_option("--procs", io.procs, "Processor count for headerless files (default 16)");
}

inline void add_solve_options(CLI::App& cmd, SolveOptions& so) {
  auto* time = cmd.add_option("--time", so.time, "Wall-clock budget per run in seconds (default 90)");
  cmd.add_option("--iters", so.iters, "Shake/descend cycles per run (reproducible)")->excludes(time);
  cmd.add_option("--seed", so.seed, "Base random seed");
  cmd.add_option("--max-swaps", so.max_swaps, "Upper limit on swaps per shake");
  cmd.add_option("--construct", so.construct, "Initial schedule: minmin, minmax-extension or random");
  cmd.add_option("--threads", so.threads, "Parallel runs (default: HCSP_THREADS or hardware)");
}

inline void add_output_options(CLI::App& cmd, OutputOptions& oo) {
  cmd.add_option("--format", oo.format, "json or csv");
  cmd.add_option("--out", oo.out, "Output file, or json/csv to pick the format");
}

/// Runs one command line (args exclude the program name). Results go to
/// `out`; failures print a single `error: ...` line on `err`.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heterogeneous multi-processor scheduling: min-min, local search and shaking"};
  app.require_subcommand(1);

  InstanceOptions io;
  SolveOptions so;
  OutputOptions oo;

  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  add_instance_options(*solve_cmd, io);
  add_solve_options(*solve_cmd, so);
  solve_cmd->add_option("--best-of", so.best_of, "Independent runs, best result kept")->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--exact", so.exact, "Exhaustive optimum (tiny instances only)");
  add_output_options(*solve_cmd, oo);

  auto* exact_cmd = app.add_subcommand("exact", "Exhaustive optimum for tiny instances");
  add_instance_options(*exact_cmd, io);
  add_output_options(*exact_cmd, oo);

  std::string cls;
  std::size_t gen_tasks = kBraunTasks;
  std::size_t gen_procs = kBraunProcs;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "Generate a self-describing instance file");
  gen_cmd->add_option("--class", cls, "Instance class, e.g. u_c_hihi")->required();
  gen_cmd->add_option("--tasks", gen_tasks, "Task count")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--procs", gen_procs, "Processor count")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen_seed, "Random seed");
  gen_cmd->add_option("--out", gen_out, "Output file (default stdout)");

  auto* bench_cmd = app.add_subcommand("bench", "Mean and CV of best-of-k makespans");
  add_instance_options(*bench_cmd, io);
  add_solve_options(*bench_cmd, so);
  bench_cmd->add_option("--best-of", so.best_of, "Runs per repetition")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--reps", so.reps, "Repetitions per instance")->check(CLI::PositiveNumber);
  add_output_options(*bench_cmd, oo);

  bool wilcoxon = false;
  std::vector<std::string> csv_files;
  auto* compare_cmd = app.add_subcommand("compare", "Paired comparison of two result files");
  compare_cmd->add_flag("--wilcoxon", wilcoxon, "Wilcoxon matched-pairs signed-ranks test")->required();
  compare_cmd->add_option("files", csv_files, "Two CSV files of instance,makespan")->expected(2);
  add_output_options(*compare_cmd, oo);

  std::vector<std::string> argv_store{"hcsp"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << '\n';
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) {
      if (so.best_of.value_or(1) > 1 && so.exact) throw UsageError("--exact cannot be combined with --best-of");
      emit(oo, out, run_solve(io, so, oo));
    } else if (exact_cmd->parsed()) {
      so.exact = true;
      emit(oo, out, run_solve(io, so, oo));
    } else if (gen_cmd->parsed()) {
      OutputOptions go{gen_out, "json"};
      emit(go, out, run_generate(cls, gen_tasks, gen_procs, gen_seed));
    } else if (bench_cmd->parsed()) {
      emit(oo, out, run_bench(io, so, oo));
    } else if (compare_cmd->parsed()) {
      emit(oo, out, run_compare(csv_files, oo));
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace hcsp::cli
