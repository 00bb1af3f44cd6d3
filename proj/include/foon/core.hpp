#pragma once

// Domain types for functional object-oriented networks: object nodes with
// their states, functional units (inputs -> motion -> outputs), the indexed
// universe graph, kitchens, motion profiles and task trees.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace foon {

/// Lowercase (ASCII), trim, and collapse internal whitespace runs to one space.
std::string normalize(std::string_view text);

/// Object held by a container: the "[X]" payload of an "in [X]" state.
struct Container {
  std::string name;
  friend bool operator==(const Container&, const Container&) = default;
};

/// Ingredients held by an object: the "{A,B}" payload of a "contains" state.
struct Contents {
  std::vector<std::string> items;  // sorted, unique
  friend bool operator==(const Contents&, const Contents&) = default;
};

using Relation = std::variant<std::monostate, Container, Contents>;

/// One state of an object, e.g. "whole", "in [chopping board]",
/// "contains {chopped onion}". Construction normalizes every string and
/// throws foon::Error when the label or a payload name is empty.
class StateDescriptor {
 public:
  explicit StateDescriptor(std::string_view label);
  StateDescriptor(std::string_view label, Container container);
  StateDescriptor(std::string_view label, Contents contents);

  const std::string& label() const noexcept { return label_; }
  const Relation& relation() const noexcept { return relation_; }
  const Container* container() const noexcept { return std::get_if<Container>(&relation_); }
  const Contents* contents() const noexcept { return std::get_if<Contents>(&relation_); }

  /// Serialized form used in node keys: label, label[x] or label{a,b}.
  const std::string& serialized() const noexcept { return serialized_; }

  friend bool operator==(const StateDescriptor& a, const StateDescriptor& b) {
    return a.serialized_ == b.serialized_;
  }

 private:
  void finish();

  std::string label_;
  Relation relation_;
  std::string serialized_;
};

/// A named kitchen object plus its state set. States are deduplicated and
/// kept sorted by serialized form; the in-motion flag does not take part in
/// identity.
class ObjectNode {
 public:
  explicit ObjectNode(std::string_view name, std::vector<StateDescriptor> states = {},
                      bool in_motion = false);

  const std::string& name() const noexcept { return name_; }
  const std::vector<StateDescriptor>& states() const noexcept { return states_; }
  bool in_motion() const noexcept { return in_motion_; }
  void set_in_motion(bool value) noexcept { in_motion_ = value; }

  /// Canonical node key, computed once at construction.
  const std::string& key() const noexcept { return key_; }

  /// Identity equality (name + states); in_motion ignored.
  friend bool operator==(const ObjectNode& a, const ObjectNode& b) { return a.key_ == b.key_; }

 private:
  std::string name_;
  std::vector<StateDescriptor> states_;
  bool in_motion_ = false;
  std::string key_;
};

/// Deterministic identity of an object node, e.g. "onions|chopped+in[chopping board]".
/// Reserved characters inside names are backslash-escaped so distinct nodes
/// never share a key.
std::string canonical_node_key(const ObjectNode& node);

struct Motion {
  Motion() = default;
  explicit Motion(std::string_view label, std::vector<std::string> extras = {});

  std::string label;
  std::vector<std::string> extras;  // trailing fields kept verbatim, ignored semantically
};

struct FunctionalUnit {
  std::vector<ObjectNode> inputs;
  Motion motion;
  std::vector<ObjectNode> outputs;
  std::size_t source_index = 0;
};

/// Identity of a unit: sorted input keys, motion label, sorted output keys.
/// Flags, extras and source_index are excluded.
std::string canonical_unit_key(const FunctionalUnit& unit);

/// Structural problems that make a unit unusable (empty inputs/outputs).
/// Returns an empty string for a well-formed unit.
std::string unit_error(const FunctionalUnit& unit);

/// Output nodes whose key also appears among the unit's inputs.
std::vector<std::string> untransformed_outputs(const FunctionalUnit& unit);

/// Deduplicated union of functional units, indexed by the nodes they produce.
/// Immutable once built.
class FoonGraph {
 public:
  using UnitRef = std::size_t;  // index into units()

  std::span<const FunctionalUnit> units() const noexcept { return units_; }
  const FunctionalUnit& unit(UnitRef ref) const { return units_.at(ref); }

  /// Producing units of a node key in file order; empty when none.
  std::span<const UnitRef> producers_of(std::string_view key) const;
  const std::map<std::string, std::vector<UnitRef>, std::less<>>& producers() const noexcept {
    return producers_;
  }
  const std::map<std::string, ObjectNode, std::less<>>& node_catalog() const noexcept {
    return catalog_;
  }
  std::optional<UnitRef> find_unit(std::string_view unit_key) const;

  /// How many later duplicates build_graph dropped.
  std::size_t duplicates_dropped() const noexcept { return duplicates_dropped_; }

  friend bool operator==(const FoonGraph& a, const FoonGraph& b);

 private:
  friend FoonGraph build_graph(std::vector<FunctionalUnit> units);

  std::vector<FunctionalUnit> units_;
  std::vector<std::string> unit_keys_;
  std::map<std::string, std::vector<UnitRef>, std::less<>> producers_;
  std::map<std::string, ObjectNode, std::less<>> catalog_;
  std::map<std::string, UnitRef, std::less<>> unit_index_;
  std::size_t duplicates_dropped_ = 0;
};

/// Orders units by source_index (stable), drops canonical duplicates (first
/// occurrence wins) and indexes producers. Throws EmptyUniverseError on an
/// empty sequence and foon::Error on a unit without inputs or outputs.
FoonGraph build_graph(std::vector<FunctionalUnit> units);

/// Motion label -> success rate in [0, 1].
class MotionProfile {
 public:
  /// Throws foon::Error when the rate is outside [0, 1] or not finite.
  void set_rate(std::string_view label, double rate);
  void set_default_rate(std::optional<double> rate);

  std::optional<double> find(std::string_view label) const;
  std::optional<double> default_rate() const noexcept { return default_rate_; }
  const std::map<std::string, double, std::less<>>& rates() const noexcept { return rates_; }
  bool empty() const noexcept { return rates_.empty(); }

  /// Rate for a label. A miss falls back to default_rate unless strict; with
  /// no fallback, throws MissingMotionRateError.
  double resolve(std::string_view label, bool strict) const;

 private:
  std::map<std::string, double, std::less<>> rates_;
  std::optional<double> default_rate_;
};

/// Starting inventory. Items are deduplicated by canonical key.
class Kitchen {
 public:
  Kitchen() = default;
  explicit Kitchen(std::vector<ObjectNode> items);

  void add(ObjectNode item);
  bool contains(std::string_view key) const { return items_.find(key) != items_.end(); }
  std::size_t size() const noexcept { return items_.size(); }
  const std::map<std::string, ObjectNode, std::less<>>& items() const noexcept { return items_; }

 private:
  std::map<std::string, ObjectNode, std::less<>> items_;
};

/// Exact key match: same name and identical state set.
bool kitchen_satisfies(const Kitchen& kitchen, std::string_view key);

struct TaskTree {
  std::vector<FunctionalUnit> steps;  // topological order
  std::string goal_key;
  std::string algorithm_tag;
};

}  // namespace foon
