#pragma once

#include <string>

#include "foon/core.hpp"
#include "foon/io.hpp"

#ifndef FOON_FIXTURE_DIR
#error "FOON_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace foon::testing {

inline std::string fixture_path(const std::string& file) {
  return std::string(FOON_FIXTURE_DIR) + "/" + file;
}

inline std::string fixture_text(const std::string& file) { return read_file(fixture_path(file)); }

/// Files <name>.txt, <name>_kitchen.txt, <name>_goal.txt, <name>_motions.txt.
struct Fixture {
  std::string name;
  FoonGraph graph;
  Kitchen kitchen;
  ObjectNode goal;
  MotionProfile profile;

  std::string foon_path() const { return fixture_path(name + ".txt"); }
  std::string kitchen_path() const { return fixture_path(name + "_kitchen.txt"); }
  std::string goal_path() const { return fixture_path(name + "_goal.txt"); }
  std::string motions_path() const { return fixture_path(name + "_motions.txt"); }
};

inline Fixture load_fixture(const std::string& name) {
  ParseResult parsed = parse_foon(fixture_text(name + ".txt"));
  if (!parsed.ok()) throw Error("fixture " + name + " does not parse");
  return Fixture{name, build_graph(parsed.units), parse_kitchen(fixture_text(name + "_kitchen.txt")),
                 parse_goal(fixture_text(name + "_goal.txt")),
                 parse_motion_profile(fixture_text(name + "_motions.txt"))};
}

inline const char* const kHandFixtures[] = {"a", "b", "c", "d", "f", "chop_onion"};

inline ObjectNode node(const std::string& name, std::vector<StateDescriptor> states = {}) {
  return ObjectNode(name, std::move(states));
}

}  // namespace foon::testing
