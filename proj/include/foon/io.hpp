#pragma once

// Reading and writing the tab-delimited FOON text format and its companion
// files (kitchen inventory, goal, motion success rates), plus Graphviz export.
//
// Unit block grammar, one record per line, fields separated by TAB:
//
//   O <name> <0|1>              object node, flag = in motion
//   S <label> [ [container] ]   state of the preceding object
//   S <label> {a,b,...}         contents state of the preceding object
//   M <label> <extra>...        the motion; objects before it are inputs,
//                               objects after it are outputs
//   //                          end of unit
//
// Blank lines are ignored and fields are trimmed.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "foon/core.hpp"
#include "foon/error.hpp"

namespace foon {

enum class Severity { kError, kWarning };

struct ParseDiagnostic {
  std::size_t line = 1;  // 1-based
  Severity severity = Severity::kError;
  std::string message;
};

/// "line 3: error: S line with no preceding O line"
std::string to_string(const ParseDiagnostic& diagnostic);

struct ParseResult {
  std::vector<FunctionalUnit> units;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const;
  std::size_t error_count() const;
  std::size_t warning_count() const;
};

/// Thrown by the kitchen, goal and motion-profile parsers.
class ParseError : public Error {
 public:
  explicit ParseError(ParseDiagnostic diagnostic)
      : Error(to_string(diagnostic)), diagnostic_(std::move(diagnostic)) {}
  const ParseDiagnostic& diagnostic() const noexcept { return diagnostic_; }

 private:
  ParseDiagnostic diagnostic_;
};

/// Parses a universe file. Never throws on malformed input: the first error
/// stops parsing, leaves `units` empty and is reported in `diagnostics`
/// alongside any warnings collected before it.
ParseResult parse_foon(std::string_view text);

/// Emits units in the same format, each block terminated by "//".
std::string serialize_foon(std::span<const FunctionalUnit> units);

/// "<label>\t<rate>" per line; '#' comments and blank lines are skipped. A
/// line without a TAB is split at its last whitespace run.
MotionProfile parse_motion_profile(std::string_view text);

/// O/S object blocks only; duplicate items collapse.
Kitchen parse_kitchen(std::string_view text);

/// Exactly one O/S object block.
ObjectNode parse_goal(std::string_view text);

/// Graphviz digraph: objects as green ellipses, motions as red boxes, the
/// goal node (when given) filled purple.
std::string export_dot(std::span<const FunctionalUnit> units,
                       const std::optional<std::string>& goal_key = std::nullopt);
std::string export_dot(const TaskTree& tree);
std::string export_dot(const FoonGraph& graph,
                       const std::optional<std::string>& goal_key = std::nullopt);

/// Reads a whole file; throws foon::Error when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace foon
