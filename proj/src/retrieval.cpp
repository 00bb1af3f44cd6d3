#include "foon/retrieval.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "foon/error.hpp"

namespace foon {

namespace {

using UnitRef = FoonGraph::UnitRef;

struct Candidate {
  UnitRef ref;
  double score;
};

// Orders the producers of a subgoal; the first candidate is tried first.
using CandidateOrder = std::function<std::vector<Candidate>(std::span<const UnitRef>)>;

std::vector<std::string> distinct_keys(const std::vector<ObjectNode>& nodes) {
  std::vector<std::string> keys;
  for (const auto& n : nodes)
    if (std::find(keys.begin(), keys.end(), n.key()) == keys.end()) keys.push_back(n.key());
  return keys;
}

// Depth-first backward resolution with undo. One instance per search pass.
class Resolver {
 public:
  Resolver(const FoonGraph& graph, const Kitchen& kitchen, CandidateOrder order, bool backtrack,
           RetrievalStats& stats, std::vector<ChoiceEvent>* trace)
      : graph_(graph),
        kitchen_(kitchen),
        order_(std::move(order)),
        backtrack_(backtrack),
        stats_(stats),
        trace_(trace) {}

  bool run(const std::string& goal_key, std::size_t limit) {
    open_ = 1;
    stats_.peak_open_set = std::max<std::size_t>(stats_.peak_open_set, 1);
    return resolve(goal_key, limit, 0).has_value();
  }

  const std::vector<UnitRef>& placed() const noexcept { return placed_; }

  /// True when some branch failed only because of the depth limit.
  bool limit_hit() const noexcept { return limit_hit_; }

 private:
  // Level of the resolved key (0 for kitchen items), or nullopt on a dead end.
  // `budget` is the highest level a step producing `key` may have.
  std::optional<std::size_t> resolve(const std::string& key, std::size_t budget,
                                     std::size_t depth) {
    stats_.depth_reached = std::max(stats_.depth_reached, depth);
    if (auto it = produced_.find(key); it != produced_.end()) {
      if (it->second <= budget) return it->second;
      limit_hit_ = true;
      return std::nullopt;
    }
    if (kitchen_satisfies(kitchen_, key)) return 0;
    if (path_.count(key)) return std::nullopt;

    const auto producers = graph_.producers_of(key);
    if (producers.empty()) return std::nullopt;
    if (budget == 0) {
      limit_hit_ = true;
      return std::nullopt;
    }

    const std::vector<Candidate> candidates = order_(producers);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const UnitRef ref = candidates[i].ref;
      if (trace_) {
        ChoiceEvent event{key, ref, {}};
        for (std::size_t j = i; j < candidates.size(); ++j)
          event.remaining.emplace_back(candidates[j].ref, candidates[j].score);
        trace_->push_back(std::move(event));
      }
      ++stats_.expanded_units;
      if (auto level = expand(key, ref, budget, depth)) return level;
      ++stats_.backtracks;
      if (!backtrack_) return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<std::size_t> expand(const std::string& key, UnitRef ref, std::size_t budget,
                                    std::size_t depth) {
    const FunctionalUnit& unit = graph_.unit(ref);
    for (const auto& out : unit.outputs)
      if (path_.count(out.key())) return std::nullopt;

    const std::size_t placed_mark = placed_.size();
    const std::size_t produced_mark = produced_log_.size();
    const auto inputs = distinct_keys(unit.inputs);

    path_.insert(key);
    open_ += inputs.size();
    stats_.peak_open_set = std::max(stats_.peak_open_set, open_);
    std::size_t input_level = 0;
    std::size_t done = 0;
    bool ok = true;
    for (const auto& input : inputs) {
      auto level = resolve(input, budget - 1, depth + 1);
      ++done;
      --open_;
      if (!level) {
        ok = false;
        break;
      }
      input_level = std::max(input_level, *level);
    }
    open_ -= inputs.size() - done;
    path_.erase(key);

    if (!ok) {
      placed_.resize(placed_mark);
      while (produced_log_.size() > produced_mark) {
        produced_.erase(produced_log_.back());
        produced_log_.pop_back();
      }
      return std::nullopt;
    }

    const std::size_t level = input_level + 1;
    placed_.push_back(ref);
    for (const auto& out : unit.outputs) {
      if (produced_.emplace(out.key(), level).second) produced_log_.push_back(out.key());
    }
    return produced_.at(key);
  }

  const FoonGraph& graph_;
  const Kitchen& kitchen_;
  CandidateOrder order_;
  bool backtrack_;
  RetrievalStats& stats_;
  std::vector<ChoiceEvent>* trace_;

  std::vector<UnitRef> placed_;
  std::unordered_map<std::string, std::size_t> produced_;  // key -> level of first producer
  std::vector<std::string> produced_log_;
  std::unordered_set<std::string> path_;
  std::size_t open_ = 0;
  bool limit_hit_ = false;
};

void check_goal(const FoonGraph& graph, const ObjectNode& goal, const Kitchen& kitchen) {
  if (!kitchen_satisfies(kitchen, goal.key()) && graph.producers_of(goal.key()).empty())
    throw UnknownGoalError(goal.key());
}

TaskTree make_tree(const FoonGraph& graph, const std::vector<UnitRef>& refs,
                   const ObjectNode& goal, Algorithm algorithm) {
  TaskTree tree;
  tree.goal_key = goal.key();
  tree.algorithm_tag = to_string(algorithm);
  for (UnitRef ref : refs) tree.steps.push_back(graph.unit(ref));
  return tree;
}

}  // namespace

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kIds: return "ids";
    case Algorithm::kGbfsSuccess: return "gbfs-success";
    case Algorithm::kGbfsInputs: return "gbfs-inputs";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  for (Algorithm a : {Algorithm::kIds, Algorithm::kGbfsSuccess, Algorithm::kGbfsInputs})
    if (to_string(a) == text) return a;
  return std::nullopt;
}

double heuristic_input_count(const FunctionalUnit& unit) {
  return static_cast<double>(unit.inputs.size());
}

double heuristic_success(const FunctionalUnit& unit, const MotionProfile& profile, bool strict) {
  return profile.resolve(unit.motion.label, strict);
}

RetrievalResult retrieve_ids(const FoonGraph& graph, const ObjectNode& goal,
                             const Kitchen& kitchen, const RetrievalConfig& config) {
  check_goal(graph, goal, kitchen);
  const CandidateOrder file_order = [](std::span<const UnitRef> producers) {
    std::vector<Candidate> out;
    for (UnitRef ref : producers) out.push_back({ref, static_cast<double>(ref)});
    return out;
  };

  RetrievalResult result;
  for (std::size_t limit = 0; limit <= config.max_depth; ++limit) {
    RetrievalStats pass;
    Resolver resolver(graph, kitchen, file_order, true, pass, nullptr);
    const bool found = resolver.run(goal.key(), limit);
    result.stats.expanded_units += pass.expanded_units;
    result.stats.backtracks += pass.backtracks;
    result.stats.peak_open_set = std::max(result.stats.peak_open_set, pass.peak_open_set);
    result.stats.depth_reached = limit;
    if (found) {
      result.tree = make_tree(graph, resolver.placed(), goal, Algorithm::kIds);
      return result;
    }
    if (!resolver.limit_hit()) {
      result.summary = "no task tree exists (search exhausted at depth limit " +
                       std::to_string(limit) + ", " + std::to_string(result.stats.backtracks) +
                       " backtracks)";
      return result;
    }
  }
  result.summary = "no task tree within depth limit " + std::to_string(config.max_depth) + " (" +
                   std::to_string(result.stats.backtracks) + " backtracks)";
  return result;
}

RetrievalResult retrieve_gbfs(const FoonGraph& graph, const ObjectNode& goal,
                              const Kitchen& kitchen, const RetrievalConfig& config) {
  if (config.algorithm == Algorithm::kIds)
    throw ConfigError("retrieve_gbfs needs a gbfs-success or gbfs-inputs configuration");
  if (config.algorithm == Algorithm::kGbfsSuccess && !config.motion_profile)
    throw ConfigError("gbfs-success requires a motion profile");
  check_goal(graph, goal, kitchen);

  CandidateOrder order;
  if (config.algorithm == Algorithm::kGbfsSuccess) {
    const MotionProfile& profile = *config.motion_profile;
    const bool strict = config.strict_motions;
    order = [&graph, &profile, strict](std::span<const UnitRef> producers) {
      std::vector<Candidate> out;
      for (UnitRef ref : producers)
        out.push_back({ref, heuristic_success(graph.unit(ref), profile, strict)});
      std::stable_sort(out.begin(), out.end(),
                       [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
      return out;
    };
  } else {
    order = [&graph](std::span<const UnitRef> producers) {
      std::vector<Candidate> out;
      for (UnitRef ref : producers) out.push_back({ref, heuristic_input_count(graph.unit(ref))});
      std::stable_sort(out.begin(), out.end(),
                       [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
      return out;
    };
  }

  RetrievalResult result;
  Resolver resolver(graph, kitchen, order, config.backtrack, result.stats,
                    config.record_trace ? &result.trace : nullptr);
  if (resolver.run(goal.key(), config.max_depth)) {
    result.tree = make_tree(graph, resolver.placed(), goal, config.algorithm);
  } else {
    result.summary = std::string("no task tree found") +
                     (config.backtrack ? "" : " without backtracking") + " (" +
                     std::to_string(result.stats.expanded_units) + " units expanded, " +
                     std::to_string(result.stats.backtracks) + " backtracks" +
                     (resolver.limit_hit()
                          ? ", depth limit " + std::to_string(config.max_depth) + " hit"
                          : "") +
                     ")";
  }
  return result;
}

RetrievalResult retrieve(const FoonGraph& graph, const ObjectNode& goal, const Kitchen& kitchen,
                         const RetrievalConfig& config) {
  if (config.algorithm == Algorithm::kIds) return retrieve_ids(graph, goal, kitchen, config);
  return retrieve_gbfs(graph, goal, kitchen, config);
}

TreeValidation validate_tree(const TaskTree& tree, const FoonGraph& graph,
                             const Kitchen& kitchen) {
  TreeValidation v;
  const auto report = [&v](std::string message) {
    v.valid = false;
    v.diagnostics.push_back(std::move(message));
  };

  std::set<std::string> available;
  std::set<std::string> seen_units;
  for (std::size_t i = 0; i < tree.steps.size(); ++i) {
    const auto& step = tree.steps[i];
    const std::string label = "step " + std::to_string(i + 1) + " (" + step.motion.label + ")";
    const std::string key = canonical_unit_key(step);
    if (!graph.find_unit(key)) report(label + " is not a unit of the universe");
    if (!seen_units.insert(key).second) report(label + " duplicates an earlier step");
    for (const auto& input : step.inputs) {
      if (!kitchen_satisfies(kitchen, input.key()) && !available.count(input.key()))
        report(label + ": input '" + input.key() +
               "' is neither in the kitchen nor produced by an earlier step");
    }
    for (const auto& output : step.outputs) available.insert(output.key());
  }

  if (tree.steps.empty()) {
    if (!kitchen_satisfies(kitchen, tree.goal_key))
      report("empty tree but goal '" + tree.goal_key + "' is not in the kitchen");
  } else {
    const auto& last = tree.steps.back().outputs;
    const bool produces_goal = std::any_of(last.begin(), last.end(), [&](const ObjectNode& n) {
      return n.key() == tree.goal_key;
    });
    if (!produces_goal) report("final step does not output goal '" + tree.goal_key + "'");
  }
  return v;
}

}  // namespace foon
