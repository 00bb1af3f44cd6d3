#include "foon/core.hpp"

#include <algorithm>
#include <cmath>

#include "foon/error.hpp"

namespace foon {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

// Characters with structural meaning inside node and unit keys.
bool is_reserved(char c) {
  switch (c) {
    case '\\': case '|': case '+': case '[': case ']':
    case '{': case '}': case ',': case ';': case '>':
      return true;
    default:
      return false;
  }
}

void append_escaped(std::string& out, std::string_view text) {
  for (char c : text) {
    if (is_reserved(c)) out.push_back('\\');
    out.push_back(c);
  }
}

std::string require_normalized(std::string_view text, const char* what) {
  std::string value = normalize(text);
  if (value.empty()) throw Error(std::string(what) + " is empty");
  return value;
}

}  // namespace

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// StateDescriptor

StateDescriptor::StateDescriptor(std::string_view label)
    : label_(require_normalized(label, "state label")) {
  finish();
}

StateDescriptor::StateDescriptor(std::string_view label, Container container)
    : label_(require_normalized(label, "state label")),
      relation_(Container{require_normalized(container.name, "container name")}) {
  finish();
}

StateDescriptor::StateDescriptor(std::string_view label, Contents contents)
    : label_(require_normalized(label, "state label")) {
  if (contents.items.empty()) throw Error("contents list is empty");
  Contents normalized;
  for (const auto& item : contents.items)
    normalized.items.push_back(require_normalized(item, "contents item"));
  std::sort(normalized.items.begin(), normalized.items.end());
  normalized.items.erase(std::unique(normalized.items.begin(), normalized.items.end()),
                         normalized.items.end());
  relation_ = std::move(normalized);
  finish();
}

void StateDescriptor::finish() {
  serialized_.clear();
  append_escaped(serialized_, label_);
  if (const auto* c = container()) {
    serialized_.push_back('[');
    append_escaped(serialized_, c->name);
    serialized_.push_back(']');
  } else if (const auto* c = contents()) {
    serialized_.push_back('{');
    for (std::size_t i = 0; i < c->items.size(); ++i) {
      if (i) serialized_.push_back(',');
      append_escaped(serialized_, c->items[i]);
    }
    serialized_.push_back('}');
  }
}

// ---------------------------------------------------------------------------
// ObjectNode

ObjectNode::ObjectNode(std::string_view name, std::vector<StateDescriptor> states, bool in_motion)
    : name_(require_normalized(name, "object name")),
      states_(std::move(states)),
      in_motion_(in_motion) {
  std::sort(states_.begin(), states_.end(),
            [](const StateDescriptor& a, const StateDescriptor& b) {
              return a.serialized() < b.serialized();
            });
  states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
  key_ = canonical_node_key(*this);
}

std::string canonical_node_key(const ObjectNode& node) {
  std::string key;
  append_escaped(key, node.name());
  for (std::size_t i = 0; i < node.states().size(); ++i) {
    key.push_back(i == 0 ? '|' : '+');
    key += node.states()[i].serialized();
  }
  return key;
}

// ---------------------------------------------------------------------------
// Motion / FunctionalUnit

Motion::Motion(std::string_view label, std::vector<std::string> extras)
    : label(require_normalized(label, "motion label")), extras(std::move(extras)) {}

std::string canonical_unit_key(const FunctionalUnit& unit) {
  auto sorted_keys = [](const std::vector<ObjectNode>& nodes) {
    std::vector<std::string> keys;
    keys.reserve(nodes.size());
    for (const auto& n : nodes) keys.push_back(n.key());
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
  };
  std::string key;
  const auto append_list = [&key](const std::vector<std::string>& keys) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) key.push_back(';');
      key += keys[i];
    }
  };
  append_list(sorted_keys(unit.inputs));
  key.push_back('>');
  append_escaped(key, unit.motion.label);
  key.push_back('>');
  append_list(sorted_keys(unit.outputs));
  return key;
}

std::string unit_error(const FunctionalUnit& unit) {
  if (unit.inputs.empty()) return "functional unit has no input objects";
  if (unit.outputs.empty()) return "functional unit has no output objects";
  if (unit.motion.label.empty()) return "functional unit has no motion";
  return {};
}

std::vector<std::string> untransformed_outputs(const FunctionalUnit& unit) {
  std::vector<std::string> same;
  for (const auto& out : unit.outputs) {
    const bool also_input = std::any_of(unit.inputs.begin(), unit.inputs.end(),
                                        [&](const ObjectNode& in) { return in.key() == out.key(); });
    if (also_input) same.push_back(out.key());
  }
  return same;
}

// ---------------------------------------------------------------------------
// FoonGraph

std::span<const FoonGraph::UnitRef> FoonGraph::producers_of(std::string_view key) const {
  auto it = producers_.find(key);
  if (it == producers_.end()) return {};
  return it->second;
}

std::optional<FoonGraph::UnitRef> FoonGraph::find_unit(std::string_view unit_key) const {
  auto it = unit_index_.find(unit_key);
  if (it == unit_index_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const FoonGraph& a, const FoonGraph& b) {
  if (a.unit_keys_ != b.unit_keys_ || a.producers_ != b.producers_) return false;
  for (std::size_t i = 0; i < a.units_.size(); ++i)
    if (a.units_[i].source_index != b.units_[i].source_index) return false;
  return true;
}

FoonGraph build_graph(std::vector<FunctionalUnit> units) {
  if (units.empty()) throw EmptyUniverseError();
  std::stable_sort(units.begin(), units.end(),
                   [](const FunctionalUnit& a, const FunctionalUnit& b) {
                     return a.source_index < b.source_index;
                   });

  FoonGraph graph;
  for (auto& unit : units) {
    if (auto problem = unit_error(unit); !problem.empty()) throw Error(problem);
    std::string key = canonical_unit_key(unit);
    if (graph.unit_index_.count(key)) {
      ++graph.duplicates_dropped_;
      continue;
    }
    const FoonGraph::UnitRef ref = graph.units_.size();
    graph.unit_index_.emplace(key, ref);
    graph.unit_keys_.push_back(std::move(key));
    for (const auto& node : unit.inputs) graph.catalog_.try_emplace(node.key(), node);
    for (const auto& node : unit.outputs) {
      graph.catalog_.try_emplace(node.key(), node);
      auto& refs = graph.producers_[node.key()];
      if (refs.empty() || refs.back() != ref) refs.push_back(ref);
    }
    graph.units_.push_back(std::move(unit));
  }
  return graph;
}

// ---------------------------------------------------------------------------
// MotionProfile

namespace {
void check_rate(double rate) {
  if (!std::isfinite(rate) || rate < 0.0 || rate > 1.0)
    throw Error("success rate " + std::to_string(rate) + " outside [0, 1]");
}
}  // namespace

void MotionProfile::set_rate(std::string_view label, double rate) {
  check_rate(rate);
  rates_[require_normalized(label, "motion label")] = rate;
}

void MotionProfile::set_default_rate(std::optional<double> rate) {
  if (rate) check_rate(*rate);
  default_rate_ = rate;
}

std::optional<double> MotionProfile::find(std::string_view label) const {
  auto it = rates_.find(normalize(label));
  if (it == rates_.end()) return std::nullopt;
  return it->second;
}

double MotionProfile::resolve(std::string_view label, bool strict) const {
  if (auto rate = find(label)) return *rate;
  if (!strict && default_rate_) return *default_rate_;
  throw MissingMotionRateError(normalize(label));
}

// ---------------------------------------------------------------------------
// Kitchen

Kitchen::Kitchen(std::vector<ObjectNode> items) {
  for (auto& item : items) add(std::move(item));
}

void Kitchen::add(ObjectNode item) {
  item.set_in_motion(false);
  items_.try_emplace(item.key(), std::move(item));
}

bool kitchen_satisfies(const Kitchen& kitchen, std::string_view key) {
  return kitchen.contains(key);
}

}  // namespace foon
