#pragma once

// Task tree metrics, the exhaustive enumeration oracle, and side-by-side
// comparison of the retrieval algorithms.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "foon/core.hpp"
#include "foon/retrieval.hpp"

namespace foon {

struct TreeMetrics {
  std::size_t unit_count = 0;
  double success_product = 1.0;  // product of motion rates over steps
  double success_min = 1.0;      // weakest motion; 1 for an empty tree
  std::size_t max_chain_depth = 0;
  std::size_t leaf_count = 0;  // distinct inputs no earlier step outputs
};

/// Step level = 1 + the deepest level among its inputs, where an input takes
/// the level of the first earlier step that outputs it and 0 otherwise.
/// max_chain_depth is the largest step level.
TreeMetrics tree_metrics(const TaskTree& tree, const MotionProfile& profile, bool strict = false);

/// Same as tree_metrics but leaves the success fields NaN instead of needing rates.
TreeMetrics tree_structure(const TaskTree& tree);

/// Canonical identity of a tree as an unordered set of units; two
/// interleavings of the same steps compare equal.
std::string canonical_tree_key(const TaskTree& tree);

/// Every distinct task tree with max_chain_depth <= depth_cap reachable by
/// choosing, for each open subgoal, any one of its producers under the same
/// resolution rules retrieval uses (reuse, kitchen, cycle rejection). Brute
/// force, no heuristics, no depth iteration. Throws OracleCapExceededError
/// when the universe has more than `oracle_cap` units and UnknownGoalError
/// for an unknown goal.
std::vector<TaskTree> enumerate_all_task_trees(const FoonGraph& graph, const ObjectNode& goal,
                                               const Kitchen& kitchen, std::size_t depth_cap,
                                               std::size_t oracle_cap = 64);

enum class Outcome { kFound, kNotFound, kError };
std::string to_string(Outcome outcome);

struct AlgorithmReport {
  Algorithm algorithm = Algorithm::kIds;
  Outcome outcome = Outcome::kNotFound;
  std::string message;                // not-found summary or error text
  std::optional<TreeMetrics> metrics;  // present when found
  std::vector<std::string> step_motions;
  RetrievalStats stats;
  double wall_ms = 0.0;
};

struct ComparisonReport {
  std::string fixture;
  std::string goal_key;
  std::vector<AlgorithmReport> algorithms;  // ids, gbfs-success, gbfs-inputs
};

struct CompareOptions {
  std::size_t max_depth = 50;
  bool strict_motions = false;
  bool backtrack = true;
  std::string fixture;
};

/// Runs all three algorithms. A NotFound or a missing motion rate inside one
/// algorithm is recorded in its entry; UnknownGoalError propagates.
ComparisonReport compare_algorithms(const FoonGraph& graph, const ObjectNode& goal,
                                    const Kitchen& kitchen, const MotionProfile& profile,
                                    const CompareOptions& options = {});

/// JSON with stable key order. Wall time is included only on request so the
/// default output is reproducible byte for byte.
std::string report_to_json(const ComparisonReport& report, bool include_timing = false);

/// Aligned text table: one column per algorithm.
std::string report_to_table(const ComparisonReport& report, bool include_timing = false);

/// JSON summary of a single retrieval run.
std::string retrieval_to_json(Algorithm algorithm, const std::string& goal_key,
                              const RetrievalResult& result,
                              const std::optional<TreeMetrics>& metrics);

}  // namespace foon
