#pragma once

// Task tree retrieval: backward search from a goal node over a FoonGraph
// until every leaf is available in the kitchen.
//
// Both algorithms share one resolution procedure. A subgoal key is resolved
//   1. by reuse, when a step already placed in the tree outputs it;
//   2. by the kitchen, when an item matches the key exactly;
//   3. otherwise by a producing unit whose inputs are resolved recursively,
//      depth-first, in the unit's input order.
// A key already on the current resolution path is a dead end (cycle), and so
// is a candidate unit that outputs any key on that path. Steps are placed in
// post-order, which makes the returned sequence topologically ordered.
//
// IDS varies the depth limit L = 0, 1, ... and tries producers in file order.
// The level of a step is one more than the level of its deepest input (a
// reused key has the level of its first producer, a kitchen item level 0);
// a step at resolution depth d may have level at most L - d.
// GBFS orders producers by heuristic score and backtracks to the next-best
// candidate on a dead end.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "foon/core.hpp"

namespace foon {

enum class Algorithm { kIds, kGbfsSuccess, kGbfsInputs };

/// "ids", "gbfs-success", "gbfs-inputs"
std::string to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view text);

struct RetrievalConfig {
  Algorithm algorithm = Algorithm::kIds;
  std::size_t max_depth = 50;
  std::optional<MotionProfile> motion_profile;
  bool strict_motions = false;
  bool backtrack = true;      // GBFS only; false keeps the first greedy choice
  bool record_trace = false;  // GBFS only
};

struct RetrievalStats {
  std::size_t expanded_units = 0;  // candidate units tried
  std::size_t peak_open_set = 0;   // most subgoals pending at once
  std::size_t depth_reached = 0;   // IDS: last limit tried; GBFS: deepest subgoal
  std::size_t backtracks = 0;      // candidates abandoned after a dead end
};

/// One greedy choice: the candidate tried next for a subgoal, together with
/// every candidate still untried at that moment (including the chosen one).
struct ChoiceEvent {
  std::string subgoal_key;
  FoonGraph::UnitRef chosen = 0;
  std::vector<std::pair<FoonGraph::UnitRef, double>> remaining;  // (unit, score)
};

struct RetrievalResult {
  std::optional<TaskTree> tree;  // empty when not found
  RetrievalStats stats;
  std::vector<ChoiceEvent> trace;
  std::string summary;  // why nothing was found

  bool found() const noexcept { return tree.has_value(); }
};

/// |unit.inputs|; lower is better.
double heuristic_input_count(const FunctionalUnit& unit);

/// Success rate of the unit's motion; higher is better. Throws
/// MissingMotionRateError as MotionProfile::resolve does.
double heuristic_success(const FunctionalUnit& unit, const MotionProfile& profile,
                         bool strict = false);

/// Throws UnknownGoalError when the goal is neither produced nor in the kitchen.
RetrievalResult retrieve_ids(const FoonGraph& graph, const ObjectNode& goal,
                             const Kitchen& kitchen, const RetrievalConfig& config);

/// Uses config.algorithm to pick the heuristic (kIds is rejected with
/// ConfigError). gbfs-success needs config.motion_profile. config.max_depth
/// caps the level of the tree as it does for IDS.
RetrievalResult retrieve_gbfs(const FoonGraph& graph, const ObjectNode& goal,
                              const Kitchen& kitchen, const RetrievalConfig& config);

/// Dispatches on config.algorithm.
RetrievalResult retrieve(const FoonGraph& graph, const ObjectNode& goal, const Kitchen& kitchen,
                         const RetrievalConfig& config);

struct TreeValidation {
  bool valid = true;
  std::vector<std::string> diagnostics;
};

/// Checks that every step is a graph unit, appears once, and has each input
/// either in the kitchen or output by an earlier step; that the final step
/// outputs the goal (or the tree is empty and the kitchen holds the goal).
TreeValidation validate_tree(const TaskTree& tree, const FoonGraph& graph, const Kitchen& kitchen);

}  // namespace foon
