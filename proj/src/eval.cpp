#include "foon/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "foon/error.hpp"

namespace foon {

namespace {

using UnitRef = FoonGraph::UnitRef;

std::vector<std::string> distinct_input_keys(const FunctionalUnit& unit) {
  std::vector<std::string> keys;
  for (const auto& n : unit.inputs)
    if (std::find(keys.begin(), keys.end(), n.key()) == keys.end()) keys.push_back(n.key());
  return keys;
}

// Brute-force enumeration in continuation-passing style: every way of
// resolving a subgoal calls the continuation once, with the partial tree in
// place, then undoes itself.
class Enumerator {
 public:
  using Cont = std::function<void()>;

  Enumerator(const FoonGraph& graph, const Kitchen& kitchen, std::size_t depth_cap)
      : graph_(graph), kitchen_(kitchen), depth_cap_(depth_cap) {}

  void solve_key(const std::string& key, std::size_t depth, const Cont& next) {
    if (produced_.count(key) || kitchen_satisfies(kitchen_, key)) {
      next();
      return;
    }
    if (path_.count(key)) return;
    // A step resolving a subgoal at depth d sits below d ancestors, so its
    // tree has depth > d.
    if (depth >= depth_cap_) return;

    for (UnitRef ref : graph_.producers_of(key)) {
      const FunctionalUnit& unit = graph_.unit(ref);
      const bool touches_path = std::any_of(unit.outputs.begin(), unit.outputs.end(),
                                            [&](const ObjectNode& o) { return path_.count(o.key()); });
      if (touches_path) continue;
      const auto inputs = distinct_input_keys(unit);
      path_.insert(key);
      solve_list(inputs, 0, depth + 1, [&] {
        path_.erase(key);
        std::vector<std::string> added;
        for (const auto& o : unit.outputs)
          if (produced_.insert(o.key()).second) added.push_back(o.key());
        placed_.push_back(ref);
        next();
        placed_.pop_back();
        for (const auto& k : added) produced_.erase(k);
        path_.insert(key);
      });
      path_.erase(key);
    }
  }

  const std::vector<UnitRef>& placed() const noexcept { return placed_; }

 private:
  void solve_list(const std::vector<std::string>& keys, std::size_t i, std::size_t depth,
                  const Cont& next) {
    if (i == keys.size()) {
      next();
      return;
    }
    solve_key(keys[i], depth, [&] { solve_list(keys, i + 1, depth, next); });
  }

  const FoonGraph& graph_;
  const Kitchen& kitchen_;
  std::size_t depth_cap_;
  std::set<std::string> produced_;
  std::set<std::string> path_;
  std::vector<UnitRef> placed_;
};

using ordered_json = nlohmann::ordered_json;

ordered_json number_or_null(double value) {
  if (std::isnan(value)) return nullptr;
  return value;
}

ordered_json metrics_json(const TreeMetrics& m) {
  ordered_json j;
  j["unit_count"] = m.unit_count;
  j["success_product"] = number_or_null(m.success_product);
  j["success_min"] = number_or_null(m.success_min);
  j["max_chain_depth"] = m.max_chain_depth;
  j["leaf_count"] = m.leaf_count;
  return j;
}

ordered_json stats_json(const RetrievalStats& s) {
  ordered_json j;
  j["expanded_units"] = s.expanded_units;
  j["peak_open_set"] = s.peak_open_set;
  j["depth_reached"] = s.depth_reached;
  j["backtracks"] = s.backtracks;
  return j;
}

std::string fixed(double value, int precision) {
  if (std::isnan(value)) return "n/a";
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << value;
  return out.str();
}

TreeMetrics metrics_or_structure(const TaskTree& tree, const MotionProfile& profile,
                                 bool strict, std::string& note) {
  try {
    return tree_metrics(tree, profile, strict);
  } catch (const MissingMotionRateError& e) {
    note = e.what();
    return tree_structure(tree);
  }
}

}  // namespace

TreeMetrics tree_structure(const TaskTree& tree) {
  TreeMetrics m;
  m.unit_count = tree.steps.size();
  m.success_product = std::numeric_limits<double>::quiet_NaN();
  m.success_min = std::numeric_limits<double>::quiet_NaN();

  std::map<std::string, std::size_t> first_level;
  std::set<std::string> leaves;
  for (const auto& step : tree.steps) {
    std::size_t deepest = 0;
    for (const auto& input : step.inputs) {
      auto it = first_level.find(input.key());
      if (it == first_level.end()) {
        leaves.insert(input.key());
      } else {
        deepest = std::max(deepest, it->second);
      }
    }
    const std::size_t level = deepest + 1;
    m.max_chain_depth = std::max(m.max_chain_depth, level);
    for (const auto& output : step.outputs) first_level.emplace(output.key(), level);
  }
  m.leaf_count = leaves.size();
  return m;
}

TreeMetrics tree_metrics(const TaskTree& tree, const MotionProfile& profile, bool strict) {
  TreeMetrics m = tree_structure(tree);
  m.success_product = 1.0;
  m.success_min = 1.0;
  for (const auto& step : tree.steps) {
    const double rate = profile.resolve(step.motion.label, strict);
    m.success_product *= rate;
    m.success_min = std::min(m.success_min, rate);
  }
  return m;
}

std::string canonical_tree_key(const TaskTree& tree) {
  std::vector<std::string> keys;
  for (const auto& step : tree.steps) keys.push_back(canonical_unit_key(step));
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) out += k + "\n";
  return out;
}

std::vector<TaskTree> enumerate_all_task_trees(const FoonGraph& graph, const ObjectNode& goal,
                                               const Kitchen& kitchen, std::size_t depth_cap,
                                               std::size_t oracle_cap) {
  if (graph.units().size() > oracle_cap)
    throw OracleCapExceededError(graph.units().size(), oracle_cap);
  if (!kitchen_satisfies(kitchen, goal.key()) && graph.producers_of(goal.key()).empty())
    throw UnknownGoalError(goal.key());

  std::vector<TaskTree> trees;
  std::set<std::string> seen;
  Enumerator enumerator(graph, kitchen, depth_cap);
  enumerator.solve_key(goal.key(), 0, [&] {
    TaskTree tree;
    tree.goal_key = goal.key();
    tree.algorithm_tag = "oracle";
    for (UnitRef ref : enumerator.placed()) tree.steps.push_back(graph.unit(ref));
    if (tree_structure(tree).max_chain_depth > depth_cap) return;
    if (seen.insert(canonical_tree_key(tree)).second) trees.push_back(std::move(tree));
  });
  return trees;
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kFound: return "found";
    case Outcome::kNotFound: return "not-found";
    case Outcome::kError: return "error";
  }
  return "unknown";
}

ComparisonReport compare_algorithms(const FoonGraph& graph, const ObjectNode& goal,
                                    const Kitchen& kitchen, const MotionProfile& profile,
                                    const CompareOptions& options) {
  if (!kitchen_satisfies(kitchen, goal.key()) && graph.producers_of(goal.key()).empty())
    throw UnknownGoalError(goal.key());

  ComparisonReport report;
  report.fixture = options.fixture;
  report.goal_key = goal.key();
  for (Algorithm algorithm : {Algorithm::kIds, Algorithm::kGbfsSuccess, Algorithm::kGbfsInputs}) {
    RetrievalConfig config;
    config.algorithm = algorithm;
    config.max_depth = options.max_depth;
    config.motion_profile = profile;
    config.strict_motions = options.strict_motions;
    config.backtrack = options.backtrack;

    AlgorithmReport entry;
    entry.algorithm = algorithm;
    const auto start = std::chrono::steady_clock::now();
    try {
      RetrievalResult result = retrieve(graph, goal, kitchen, config);
      entry.stats = result.stats;
      if (result.found()) {
        entry.outcome = Outcome::kFound;
        for (const auto& step : result.tree->steps) entry.step_motions.push_back(step.motion.label);
        entry.metrics =
            metrics_or_structure(*result.tree, profile, options.strict_motions, entry.message);
      } else {
        entry.outcome = Outcome::kNotFound;
        entry.message = result.summary;
      }
    } catch (const MissingMotionRateError& e) {
      entry.outcome = Outcome::kError;
      entry.message = e.what();
    }
    entry.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    report.algorithms.push_back(std::move(entry));
  }
  return report;
}

std::string report_to_json(const ComparisonReport& report, bool include_timing) {
  ordered_json j;
  j["fixture"] = report.fixture;
  j["goal"] = report.goal_key;
  ordered_json algorithms = ordered_json::object();
  for (const auto& entry : report.algorithms) {
    ordered_json a;
    a["outcome"] = to_string(entry.outcome);
    a["message"] = entry.message;
    a["steps"] = entry.step_motions;
    a["metrics"] = entry.metrics ? metrics_json(*entry.metrics) : ordered_json(nullptr);
    a["stats"] = stats_json(entry.stats);
    if (include_timing) a["wall_ms"] = entry.wall_ms;
    algorithms[to_string(entry.algorithm)] = std::move(a);
  }
  j["algorithms"] = std::move(algorithms);
  return j.dump(2) + "\n";
}

std::string report_to_table(const ComparisonReport& report, bool include_timing) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"metric"};
  for (const auto& e : report.algorithms) header.push_back(to_string(e.algorithm));
  rows.push_back(header);

  const auto add_row = [&](const std::string& name, auto&& cell) {
    std::vector<std::string> row{name};
    for (const auto& e : report.algorithms) row.push_back(cell(e));
    rows.push_back(std::move(row));
  };
  const auto metric = [](auto field) {
    return [field](const AlgorithmReport& e) -> std::string { return e.metrics ? field(*e.metrics) : "-"; };
  };
  add_row("outcome", [](const AlgorithmReport& e) { return to_string(e.outcome); });
  add_row("functional units",
          metric([](const TreeMetrics& m) { return std::to_string(m.unit_count); }));
  add_row("success product", metric([](const TreeMetrics& m) { return fixed(m.success_product, 4); }));
  add_row("success min", metric([](const TreeMetrics& m) { return fixed(m.success_min, 4); }));
  add_row("chain depth",
          metric([](const TreeMetrics& m) { return std::to_string(m.max_chain_depth); }));
  add_row("expanded units",
          [](const AlgorithmReport& e) { return std::to_string(e.stats.expanded_units); });
  add_row("peak open set",
          [](const AlgorithmReport& e) { return std::to_string(e.stats.peak_open_set); });
  if (include_timing)
    add_row("wall ms", [](const AlgorithmReport& e) { return fixed(e.wall_ms, 3); });

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());

  std::ostringstream out;
  out << "goal: " << report.goal_key << "\n";
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(widths[c] - row[c].size() + 2, ' ');
    }
    out << line << "\n";
  }
  return out.str();
}

std::string retrieval_to_json(Algorithm algorithm, const std::string& goal_key,
                              const RetrievalResult& result,
                              const std::optional<TreeMetrics>& metrics) {
  ordered_json j;
  j["algorithm"] = to_string(algorithm);
  j["goal"] = goal_key;
  j["outcome"] = to_string(result.found() ? Outcome::kFound : Outcome::kNotFound);
  j["message"] = result.summary;
  std::vector<std::string> steps;
  if (result.tree)
    for (const auto& step : result.tree->steps) steps.push_back(canonical_unit_key(step));
  j["steps"] = steps;
  j["metrics"] = metrics ? metrics_json(*metrics) : ordered_json(nullptr);
  j["stats"] = stats_json(result.stats);
  return j.dump(2) + "\n";
}

}  // namespace foon
