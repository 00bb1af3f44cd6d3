#pragma once

// Subset brute force over tiny universes, independent of both the retrieval
// search and the enumeration oracle: a set of units is feasible when forward
// chaining from the kitchen fires every unit in it and ends holding the goal.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "foon/core.hpp"

namespace foon::testing {

struct FeasibleSet {
  std::uint32_t mask = 0;
  std::vector<std::size_t> firing_order;
};

inline std::optional<FeasibleSet> fire_subset(const FoonGraph& graph, const Kitchen& kitchen,
                                              const std::string& goal, std::uint32_t mask) {
  std::set<std::string> have;
  for (const auto& [key, item] : kitchen.items()) have.insert(key);
  FeasibleSet result{mask, {}};
  std::uint32_t fired = 0;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < graph.units().size(); ++i) {
      const std::uint32_t bit = 1u << i;
      if (!(mask & bit) || (fired & bit)) continue;
      bool ready = true;
      for (const auto& in : graph.unit(i).inputs) ready = ready && have.count(in.key());
      if (!ready) continue;
      fired |= bit;
      result.firing_order.push_back(i);
      for (const auto& out : graph.unit(i).outputs) have.insert(out.key());
      progress = true;
    }
  }
  if (fired != mask || !have.count(goal)) return std::nullopt;
  return result;
}

/// Feasible unit sets with no feasible proper subset. Universes of <= 12 units.
inline std::vector<FeasibleSet> minimal_feasible_sets(const FoonGraph& graph, const Kitchen& kitchen,
                                                      const std::string& goal) {
  const std::size_t n = graph.units().size();
  std::vector<FeasibleSet> feasible;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
    if (auto f = fire_subset(graph, kitchen, goal, mask)) feasible.push_back(*f);

  std::vector<FeasibleSet> minimal;
  for (const auto& f : feasible) {
    bool has_smaller = false;
    for (const auto& g : feasible)
      if (g.mask != f.mask && (g.mask & f.mask) == g.mask) has_smaller = true;
    if (!has_smaller) minimal.push_back(f);
  }
  return minimal;
}

}  // namespace foon::testing
