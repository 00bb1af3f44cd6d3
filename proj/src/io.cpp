#include "foon/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace foon {

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0;
  std::size_t number = 1;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({number++, line});
    start = end + 1;
  }
  return lines;
}

// Line number used for whole-file diagnostics: the last real line.
std::size_t last_line(std::string_view text) {
  std::size_t n = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  if (!text.empty() && text.back() != '\n') ++n;
  return std::max<std::size_t>(1, n);
}

std::string_view trim(std::string_view s) {
  const auto space = [](char c) { return c == ' ' || c == '\r' || c == '\v' || c == '\f'; };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
  });
}

// TAB-separated, trimmed, trailing empty fields dropped.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    fields.push_back(trim(line.substr(start, tab == std::string_view::npos ? tab : tab - start)));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  while (!fields.empty() && fields.back().empty()) fields.pop_back();
  return fields;
}

[[noreturn]] void fail(std::size_t line, std::string message) {
  throw ParseError({line, Severity::kError, std::move(message)});
}

struct PendingObject {
  std::string name;
  bool in_motion = false;
  std::vector<StateDescriptor> states;
  std::size_t line = 0;

  ObjectNode build() const {
    try {
      return ObjectNode(name, states, in_motion);
    } catch (const Error& e) {
      fail(line, e.what());
    }
  }
};

PendingObject parse_object_line(const std::vector<std::string_view>& fields, std::size_t line) {
  if (fields.size() < 3) fail(line, "O line needs a name and a 0/1 motion flag");
  if (fields.size() > 3) fail(line, "O line has too many fields");
  if (normalize(fields[1]).empty()) fail(line, "object name is empty");
  if (fields[2] != "0" && fields[2] != "1")
    fail(line, "O line motion flag must be 0 or 1, got '" + std::string(fields[2]) + "'");
  return {std::string(fields[1]), fields[2] == "1", {}, line};
}

StateDescriptor parse_state_line(const std::vector<std::string_view>& fields, std::size_t line) {
  if (fields.size() < 2) fail(line, "S line has no state label");
  if (fields.size() > 3) fail(line, "S line has too many fields");
  try {
    if (fields.size() == 2) return StateDescriptor(fields[1]);
    std::string_view payload = fields[2];
    if (payload.size() >= 2 && payload.front() == '[' && payload.back() == ']') {
      std::string_view inner = payload.substr(1, payload.size() - 2);
      if (normalize(inner).empty()) fail(line, "empty [container] payload");
      return StateDescriptor(fields[1], Container{std::string(inner)});
    }
    if (payload.size() >= 2 && payload.front() == '{' && payload.back() == '}') {
      std::string_view inner = payload.substr(1, payload.size() - 2);
      Contents contents;
      std::size_t start = 0;
      while (true) {
        std::size_t comma = inner.find(',', start);
        std::string_view item =
            inner.substr(start, comma == std::string_view::npos ? comma : comma - start);
        if (normalize(item).empty()) fail(line, "empty item in {contents} payload");
        contents.items.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      return StateDescriptor(fields[1], std::move(contents));
    }
    fail(line, "malformed state payload '" + std::string(payload) +
                   "' (expected [container] or {a,b})");
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(line, e.what());
  }
}

Motion parse_motion_line(const std::vector<std::string_view>& fields, std::size_t line) {
  if (fields.size() < 2 || normalize(fields[1]).empty()) fail(line, "M line has no motion label");
  std::vector<std::string> extras(fields.begin() + 2, fields.end());
  return Motion(fields[1], std::move(extras));
}

enum class LineKind { kBlank, kObject, kState, kMotion, kSeparator, kUnknown };

LineKind classify(std::string_view line, const std::vector<std::string_view>& fields) {
  if (is_blank(line)) return LineKind::kBlank;
  if (fields.size() == 1 && fields[0] == "//") return LineKind::kSeparator;
  if (fields[0] == "O") return LineKind::kObject;
  if (fields[0] == "S") return LineKind::kState;
  if (fields[0] == "M") return LineKind::kMotion;
  return LineKind::kUnknown;
}

// One unit block under construction.
struct UnitBlock {
  std::vector<PendingObject> inputs;
  std::vector<PendingObject> outputs;
  std::optional<Motion> motion;
  std::size_t first_line = 0;
  std::size_t motion_line = 0;

  bool empty() const { return first_line == 0; }
  PendingObject* current() {
    auto& list = motion ? outputs : inputs;
    return list.empty() ? nullptr : &list.back();
  }
};

class FoonParser {
 public:
  explicit FoonParser(std::string_view text) : text_(text) {}

  ParseResult run() {
    try {
      for (const Line& line : split_lines(text_)) consume(line);
      if (!block_.empty()) close_block();
      if (result_.units.empty()) fail(last_line(text_), "empty universe");
    } catch (const ParseError& e) {
      result_.units.clear();
      result_.diagnostics.push_back(e.diagnostic());
    }
    return std::move(result_);
  }

 private:
  void consume(const Line& line) {
    const auto fields = split_fields(line.text);
    const LineKind kind = classify(line.text, fields);
    if (kind == LineKind::kBlank) return;
    if (kind == LineKind::kSeparator) {
      if (block_.empty())
        warn(line.number, "empty unit block");
      else
        close_block();
      return;
    }
    if (block_.empty()) block_.first_line = line.number;
    switch (kind) {
      case LineKind::kObject: {
        auto& list = block_.motion ? block_.outputs : block_.inputs;
        list.push_back(parse_object_line(fields, line.number));
        break;
      }
      case LineKind::kState: {
        PendingObject* owner = block_.current();
        if (!owner) fail(line.number, "S line with no preceding O line");
        owner->states.push_back(parse_state_line(fields, line.number));
        break;
      }
      case LineKind::kMotion:
        if (block_.motion) fail(line.number, "second M line in one unit");
        if (block_.inputs.empty()) fail(line.number, "M line with no preceding input objects");
        block_.motion = parse_motion_line(fields, line.number);
        block_.motion_line = line.number;
        break;
      default:
        fail(line.number, "unrecognized line (expected O, S, M or //)");
    }
  }

  void close_block() {
    if (!block_.motion) fail(block_.first_line, "unit is missing its M line");
    if (block_.outputs.empty()) fail(block_.motion_line, "unit has no output objects");

    FunctionalUnit unit;
    for (const auto& p : block_.inputs) unit.inputs.push_back(p.build());
    unit.motion = std::move(*block_.motion);
    for (const auto& p : block_.outputs) unit.outputs.push_back(p.build());
    unit.source_index = result_.units.size();
    for (const auto& key : untransformed_outputs(unit))
      warn(block_.motion_line, "output '" + key + "' is identical to an input");
    result_.units.push_back(std::move(unit));
    block_ = {};
  }

  void warn(std::size_t line, std::string message) {
    result_.diagnostics.push_back({line, Severity::kWarning, std::move(message)});
  }

  std::string_view text_;
  ParseResult result_;
  UnitBlock block_;
};

// Object blocks for kitchen and goal files: O starts a block, S extends it,
// a blank line or "//" closes it.
std::vector<ObjectNode> parse_object_blocks(std::string_view text, const char* file_kind,
                                            std::vector<std::size_t>* block_lines = nullptr) {
  std::vector<PendingObject> pending;
  bool open = false;
  for (const Line& line : split_lines(text)) {
    const auto fields = split_fields(line.text);
    switch (classify(line.text, fields)) {
      case LineKind::kBlank:
      case LineKind::kSeparator:
        open = false;
        break;
      case LineKind::kObject:
        pending.push_back(parse_object_line(fields, line.number));
        open = true;
        break;
      case LineKind::kState:
        if (!open) fail(line.number, "S line with no preceding O line");
        pending.back().states.push_back(parse_state_line(fields, line.number));
        break;
      case LineKind::kMotion:
        fail(line.number, std::string("M line not allowed in a ") + file_kind + " file");
      default:
        fail(line.number, "unrecognized line (expected O or S)");
    }
  }
  std::vector<ObjectNode> nodes;
  for (const auto& p : pending) {
    nodes.push_back(p.build());
    if (block_lines) block_lines->push_back(p.line);
  }
  return nodes;
}

void append_state_display(std::string& out, const StateDescriptor& state) {
  out += state.label();
  if (const auto* c = state.container()) {
    out += " [" + c->name + "]";
  } else if (const auto* c = state.contents()) {
    out += " {";
    for (std::size_t i = 0; i < c->items.size(); ++i) {
      if (i) out += ", ";
      out += c->items[i];
    }
    out += "}";
  }
}

std::string dot_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string to_string(const ParseDiagnostic& diagnostic) {
  return "line " + std::to_string(diagnostic.line) + ": " +
         (diagnostic.severity == Severity::kError ? "error: " : "warning: ") + diagnostic.message;
}

bool ParseResult::ok() const { return error_count() == 0; }

std::size_t ParseResult::error_count() const {
  return static_cast<std::size_t>(std::count_if(
      diagnostics.begin(), diagnostics.end(),
      [](const ParseDiagnostic& d) { return d.severity == Severity::kError; }));
}

std::size_t ParseResult::warning_count() const { return diagnostics.size() - error_count(); }

ParseResult parse_foon(std::string_view text) { return FoonParser(text).run(); }

std::string serialize_foon(std::span<const FunctionalUnit> units) {
  std::string out;
  const auto emit_object = [&out](const ObjectNode& node) {
    out += "O\t" + node.name() + "\t" + (node.in_motion() ? "1" : "0") + "\n";
    for (const auto& state : node.states()) {
      out += "S\t" + state.label();
      if (const auto* c = state.container()) {
        out += "\t[" + c->name + "]";
      } else if (const auto* c = state.contents()) {
        out += "\t{";
        for (std::size_t i = 0; i < c->items.size(); ++i) {
          if (i) out += ",";
          out += c->items[i];
        }
        out += "}";
      }
      out += "\n";
    }
  };
  for (const auto& unit : units) {
    for (const auto& node : unit.inputs) emit_object(node);
    out += "M\t" + unit.motion.label;
    for (const auto& extra : unit.motion.extras) out += "\t" + extra;
    out += "\n";
    for (const auto& node : unit.outputs) emit_object(node);
    out += "//\n";
  }
  return out;
}

MotionProfile parse_motion_profile(std::string_view text) {
  MotionProfile profile;
  std::map<std::string, double> seen;
  for (const Line& line : split_lines(text)) {
    std::string_view body = trim(line.text);
    while (!body.empty() && body.front() == '\t') body = trim(body.substr(1));
    if (is_blank(body) || body.front() == '#') continue;

    std::string_view label_field;
    std::string_view rate_field;
    if (body.find('\t') != std::string_view::npos) {
      const auto fields = split_fields(body);
      if (fields.size() != 2) fail(line.number, "expected '<motion>\\t<rate>'");
      label_field = fields[0];
      rate_field = fields[1];
    } else {
      std::size_t cut = body.find_last_of(" \v\f");
      if (cut == std::string_view::npos) fail(line.number, "expected '<motion>\\t<rate>'");
      label_field = trim(body.substr(0, cut));
      rate_field = trim(body.substr(cut + 1));
    }
    const std::string label = normalize(label_field);
    if (label.empty()) fail(line.number, "empty motion label");

    double rate = 0.0;
    const char* first = rate_field.data();
    const char* last = first + rate_field.size();
    auto [ptr, ec] = std::from_chars(first, last, rate);
    if (rate_field.empty() || ec != std::errc() || ptr != last)
      fail(line.number, "non-numeric success rate '" + std::string(rate_field) + "'");
    if (!std::isfinite(rate) || rate < 0.0 || rate > 1.0)
      fail(line.number, "success rate " + std::string(rate_field) + " outside [0, 1]");

    auto [it, inserted] = seen.emplace(label, rate);
    if (!inserted && it->second != rate)
      fail(line.number, "conflicting success rates for motion '" + label + "'");
    profile.set_rate(label, rate);
  }
  return profile;
}

Kitchen parse_kitchen(std::string_view text) {
  return Kitchen(parse_object_blocks(text, "kitchen"));
}

ObjectNode parse_goal(std::string_view text) {
  std::vector<std::size_t> lines;
  auto nodes = parse_object_blocks(text, "goal", &lines);
  if (nodes.empty()) fail(last_line(text), "goal file has no object block");
  if (nodes.size() > 1)
    fail(lines[1], "goal file has " + std::to_string(nodes.size()) + " object blocks, expected 1");
  return std::move(nodes.front());
}

std::string export_dot(std::span<const FunctionalUnit> units,
                       const std::optional<std::string>& goal_key) {
  std::ostringstream out;
  out << "digraph foon {\n";
  out << "  rankdir=TB;\n";

  std::map<std::string, std::string> ids;  // node key -> dot id
  const auto object_id = [&](const ObjectNode& node) -> const std::string& {
    auto [it, inserted] = ids.try_emplace(node.key(), "o" + std::to_string(ids.size()));
    if (inserted) {
      std::string label = node.name();
      if (!node.states().empty()) {
        label += "\n";
        for (std::size_t i = 0; i < node.states().size(); ++i) {
          if (i) label += ", ";
          append_state_display(label, node.states()[i]);
        }
      }
      std::string escaped = dot_escape(label);
      for (std::size_t pos = 0; (pos = escaped.find('\n', pos)) != std::string::npos; pos += 2)
        escaped.replace(pos, 1, "\\n");
      const bool is_goal = goal_key && *goal_key == node.key();
      out << "  " << it->second << " [label=\"" << escaped
          << "\", shape=ellipse, style=filled, fillcolor=" << (is_goal ? "purple" : "green")
          << "];\n";
    }
    return it->second;
  };

  for (std::size_t i = 0; i < units.size(); ++i) {
    const auto& unit = units[i];
    const std::string motion_id = "m" + std::to_string(i);
    std::vector<std::string> in_ids;
    std::vector<std::string> out_ids;
    for (const auto& node : unit.inputs) in_ids.push_back(object_id(node));
    out << "  " << motion_id << " [label=\"" << dot_escape(unit.motion.label)
        << "\", shape=box, style=filled, fillcolor=red];\n";
    for (const auto& node : unit.outputs) out_ids.push_back(object_id(node));

    std::sort(in_ids.begin(), in_ids.end());
    in_ids.erase(std::unique(in_ids.begin(), in_ids.end()), in_ids.end());
    std::sort(out_ids.begin(), out_ids.end());
    out_ids.erase(std::unique(out_ids.begin(), out_ids.end()), out_ids.end());
    for (const auto& id : in_ids) out << "  " << id << " -> " << motion_id << ";\n";
    for (const auto& id : out_ids) out << "  " << motion_id << " -> " << id << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::string export_dot(const TaskTree& tree) {
  std::optional<std::string> goal;
  if (!tree.goal_key.empty()) goal = tree.goal_key;
  return export_dot(std::span<const FunctionalUnit>(tree.steps), goal);
}

std::string export_dot(const FoonGraph& graph, const std::optional<std::string>& goal_key) {
  return export_dot(graph.units(), goal_key);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error("cannot read file: " + path);
  return buffer.str();
}

}  // namespace foon
