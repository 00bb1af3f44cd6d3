#include "foon/cli.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "foon/core.hpp"
#include "foon/error.hpp"
#include "foon/eval.hpp"
#include "foon/io.hpp"
#include "foon/retrieval.hpp"

namespace foon::cli {

namespace {

// Unwinds a command with its exit code once the message has been printed.
struct Exit {
  int code;
};

struct CommonOptions {
  std::string foon_path;
  std::string kitchen_path;
  std::string goal_path;
  std::string motions_path;
  std::size_t max_depth = 50;
  std::optional<double> default_rate;
  bool strict_motions = false;
  bool no_backtrack = false;
  std::string json_path;
  bool verbose = false;
};

struct RetrieveOptions {
  CommonOptions common;
  std::string algorithm;
  std::string out_path;
  std::string dot_path;
};

struct CompareCliOptions {
  CommonOptions common;
  bool timing = false;
};

std::string read_or_exit(const std::string& path, std::ostream& err) {
  try {
    return read_file(path);
  } catch (const Error& e) {
    err << "foon: " << e.what() << "\n";
    throw Exit{kExitInputError};
  }
}

void write_or_exit(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << text;
  file.close();
  if (!file) {
    err << "foon: cannot write file: " << path << "\n";
    throw Exit{kExitInputError};
  }
}

void print_diagnostics(const std::string& path, const ParseResult& parsed, std::ostream& err) {
  for (const auto& d : parsed.diagnostics) err << path << ": " << to_string(d) << "\n";
}

FoonGraph load_graph(const std::string& path, std::ostream& err) {
  const ParseResult parsed = parse_foon(read_or_exit(path, err));
  print_diagnostics(path, parsed, err);
  if (!parsed.ok()) throw Exit{kExitInputError};
  FoonGraph graph = build_graph(parsed.units);
  if (graph.duplicates_dropped() > 0)
    err << path << ": warning: dropped " << graph.duplicates_dropped() << " duplicate unit"
        << (graph.duplicates_dropped() == 1 ? "" : "s") << "\n";
  return graph;
}

template <typename Parse>
auto parse_or_exit(const std::string& path, std::ostream& err, Parse&& parse) {
  const std::string text = read_or_exit(path, err);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    err << path << ": " << e.what() << "\n";
    throw Exit{kExitInputError};
  }
}

struct Inputs {
  FoonGraph graph;
  Kitchen kitchen;
  ObjectNode goal;
  std::optional<MotionProfile> profile;
};

Inputs load_inputs(const CommonOptions& opts, std::ostream& err) {
  FoonGraph graph = load_graph(opts.foon_path, err);
  Kitchen kitchen = parse_or_exit(opts.kitchen_path, err, [](const std::string& t) {
    return parse_kitchen(t);
  });
  ObjectNode goal = parse_or_exit(opts.goal_path, err, [](const std::string& t) {
    return parse_goal(t);
  });
  std::optional<MotionProfile> profile;
  if (!opts.motions_path.empty())
    profile = parse_or_exit(opts.motions_path, err, [](const std::string& t) {
      return parse_motion_profile(t);
    });
  if (opts.default_rate) {
    if (!profile) profile.emplace();
    profile->set_default_rate(opts.default_rate);
  }
  return {std::move(graph), std::move(kitchen), std::move(goal), std::move(profile)};
}

void add_common(CLI::App& cmd, CommonOptions& opts, bool motions_required) {
  cmd.add_option("--foon", opts.foon_path, "Universe file")->required();
  cmd.add_option("--kitchen", opts.kitchen_path, "Kitchen inventory file")->required();
  cmd.add_option("--goal", opts.goal_path, "Goal object file")->required();
  auto* motions = cmd.add_option("--motions", opts.motions_path, "Motion success-rate file");
  if (motions_required) motions->required();
  cmd.add_option("--max-depth", opts.max_depth, "Depth limit on unit levels")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  cmd.add_option("--default-rate", opts.default_rate, "Rate for motions missing from --motions")
      ->check(CLI::Range(0.0, 1.0));
  cmd.add_flag("--strict-motions", opts.strict_motions, "Missing motion rates are errors");
  cmd.add_flag("--no-backtrack", opts.no_backtrack, "GBFS keeps its first greedy choice");
  cmd.add_option("--json", opts.json_path, "Write a JSON report to this path");
  cmd.add_flag("-v,--verbose", opts.verbose, "Print search statistics to stderr");
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  const ParseResult parsed = parse_foon(read_or_exit(path, err));
  print_diagnostics(path, parsed, err);
  if (!parsed.ok()) {
    out << parsed.error_count() << " error" << (parsed.error_count() == 1 ? "" : "s") << ", "
        << parsed.warning_count() << " warning" << (parsed.warning_count() == 1 ? "" : "s")
        << "\n";
    return kExitInputError;
  }
  const FoonGraph graph = build_graph(parsed.units);
  const std::size_t units = graph.units().size();
  const std::size_t nodes = graph.node_catalog().size();
  out << units << " unit" << (units == 1 ? "" : "s") << ", " << nodes << " object node"
      << (nodes == 1 ? "" : "s") << "\n";
  if (graph.duplicates_dropped() > 0)
    err << path << ": warning: dropped " << graph.duplicates_dropped() << " duplicate unit"
        << (graph.duplicates_dropped() == 1 ? "" : "s") << "\n";
  return kExitOk;
}

std::optional<TreeMetrics> metrics_for(const TaskTree& tree, const Inputs& in, bool strict) {
  if (in.profile) {
    try {
      return tree_metrics(tree, *in.profile, strict);
    } catch (const MissingMotionRateError&) {
    }
  }
  return tree_structure(tree);
}

int cmd_retrieve(const RetrieveOptions& opts, std::ostream& out, std::ostream& err) {
  const auto algorithm = parse_algorithm(opts.algorithm);
  if (!algorithm) {
    err << "foon: unknown algorithm '" << opts.algorithm << "'\n";
    return kExitUsage;
  }
  if (*algorithm == Algorithm::kGbfsSuccess && opts.common.motions_path.empty()) {
    err << "foon: --algorithm gbfs-success requires --motions\n";
    return kExitUsage;
  }

  const Inputs in = load_inputs(opts.common, err);
  RetrievalConfig config;
  config.algorithm = *algorithm;
  config.max_depth = opts.common.max_depth;
  config.motion_profile = in.profile;
  config.strict_motions = opts.common.strict_motions;
  config.backtrack = !opts.common.no_backtrack;

  RetrievalResult result;
  try {
    result = retrieve(in.graph, in.goal, in.kitchen, config);
  } catch (const UnknownGoalError& e) {
    out << "no task tree found: " << e.what() << "\n";
    return kExitNotFound;
  } catch (const MissingMotionRateError& e) {
    err << "foon: " << e.what() << "\n";
    return kExitInputError;
  }

  if (opts.common.verbose)
    err << "expanded " << result.stats.expanded_units << " units, peak open set "
        << result.stats.peak_open_set << ", depth " << result.stats.depth_reached << ", "
        << result.stats.backtracks << " backtracks\n";

  std::optional<TreeMetrics> metrics;
  if (result.tree) metrics = metrics_for(*result.tree, in, opts.common.strict_motions);
  if (!opts.common.json_path.empty())
    write_or_exit(opts.common.json_path,
                  retrieval_to_json(*algorithm, in.goal.key(), result, metrics), err);

  if (!result.found()) {
    out << "no task tree found: " << result.summary << "\n";
    return kExitNotFound;
  }

  const TaskTree& tree = *result.tree;
  const std::string text = serialize_foon(tree.steps);
  if (tree.steps.empty())
    out << "goal already satisfied\n";
  else
    out << "task tree with " << tree.steps.size() << " functional unit"
        << (tree.steps.size() == 1 ? "" : "s") << " (" << tree.algorithm_tag << ")\n";
  if (!opts.out_path.empty())
    write_or_exit(opts.out_path, text, err);
  else
    out << text;
  if (!opts.dot_path.empty()) write_or_exit(opts.dot_path, export_dot(tree), err);
  return kExitOk;
}

int cmd_compare(const CompareCliOptions& opts, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(opts.common, err);
  CompareOptions options;
  options.max_depth = opts.common.max_depth;
  options.strict_motions = opts.common.strict_motions;
  options.backtrack = !opts.common.no_backtrack;
  options.fixture = std::filesystem::path(opts.common.foon_path).filename().string();

  ComparisonReport report;
  try {
    report = compare_algorithms(in.graph, in.goal, in.kitchen, *in.profile, options);
  } catch (const UnknownGoalError& e) {
    out << "no task tree found: " << e.what() << "\n";
    return kExitNotFound;
  }
  out << report_to_table(report, opts.timing);
  if (!opts.common.json_path.empty())
    write_or_exit(opts.common.json_path, report_to_json(report, opts.timing), err);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Task tree retrieval over functional object-oriented networks", "foon"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse a universe file and report diagnostics");
  validate->add_option("foon", validate_path, "Universe file")->required();

  RetrieveOptions retrieve_opts;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "Retrieve a task tree for a goal");
  add_common(*retrieve_cmd, retrieve_opts.common, false);
  retrieve_cmd->add_option("--algorithm", retrieve_opts.algorithm, "ids | gbfs-success | gbfs-inputs")
      ->required();
  retrieve_cmd->add_option("--out", retrieve_opts.out_path, "Write the tree (FOON text) here");
  retrieve_cmd->add_option("--dot", retrieve_opts.dot_path, "Write a Graphviz rendering here");

  CompareCliOptions compare_opts;
  auto* compare_cmd = app.add_subcommand("compare", "Run all algorithms and tabulate metrics");
  add_common(*compare_cmd, compare_opts.common, true);
  compare_cmd->add_flag("--timing", compare_opts.timing, "Include wall-clock times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_path, out, err);
    if (*retrieve_cmd) return cmd_retrieve(retrieve_opts, out, err);
    return cmd_compare(compare_opts, out, err);
  } catch (const Exit& e) {
    return e.code;
  } catch (const Error& e) {
    err << "foon: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace foon::cli
