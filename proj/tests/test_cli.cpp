#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "foon/cli.hpp"
#include "foon/io.hpp"
#include "foon/retrieval.hpp"
#include "support/fixtures.hpp"

#ifndef FOON_BINARY
#error "FOON_BINARY must point at the foon executable"
#endif

namespace foon {
namespace {

namespace fs = std::filesystem;
using testing::fixture_path;
using testing::load_fixture;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "foon");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> fixture_args(const std::string& name, bool motions = true) {
  std::vector<std::string> args = {"--foon",    fixture_path(name + ".txt"),
                                   "--kitchen", fixture_path(name + "_kitchen.txt"),
                                   "--goal",    fixture_path(name + "_goal.txt")};
  if (motions) {
    args.push_back("--motions");
    args.push_back(fixture_path(name + "_motions.txt"));
  }
  return args;
}

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("foon_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const std::string& path) { return read_file(path); }

TEST(CliValidate, ChopOnion) {
  const CliRun r = run_cli({"validate", fixture_path("chop_onion.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1 unit, 6 object nodes\n");
}

TEST(CliValidate, FixtureA) {
  const CliRun r = run_cli({"validate", fixture_path("a.txt")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("2 units, ", 0), 0u) << r.out;
}

TEST(CliValidate, GrammarErrorsExitTwo) {
  for (const char* bad : {"s_before_o.txt", "bad_flag.txt", "missing_motion.txt", "empty.txt"}) {
    const CliRun r = run_cli({"validate", fixture_path(std::string("bad/") + bad)});
    EXPECT_EQ(r.code, 2) << bad;
    EXPECT_NE(r.err.find("line "), std::string::npos) << bad;
    EXPECT_NE(r.out.find("1 error"), std::string::npos) << bad;
  }
}

TEST(CliValidate, MissingFileExitsTwo) {
  EXPECT_EQ(run_cli({"validate", "/nonexistent/universe.txt"}).code, 2);
}

TEST(CliUsage, BadInvocationsExitThree) {
  EXPECT_EQ(run_cli({}).code, 3);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 3);
  EXPECT_EQ(run_cli({"validate"}).code, 3);
  EXPECT_EQ(run_cli(with({"retrieve"}, fixture_args("a"))).code, 3);  // no --algorithm
  EXPECT_EQ(run_cli(with({"retrieve", "--algorithm", "astar"}, fixture_args("a"))).code, 3);
  EXPECT_EQ(run_cli(with({"retrieve", "--algorithm", "gbfs-success"}, fixture_args("a", false))).code, 3);
  EXPECT_EQ(run_cli(with({"compare"}, fixture_args("a", false))).code, 3);
  EXPECT_EQ(run_cli(with({"retrieve", "--algorithm", "ids", "--max-depth", "0"}, fixture_args("a"))).code, 3);
  EXPECT_EQ(run_cli(with({"retrieve", "--algorithm", "ids", "--default-rate", "2"}, fixture_args("a"))).code, 3);
}

TEST(CliUsage, HelpExitsZero) { EXPECT_EQ(run_cli({"--help"}).code, 0); }

TEST(CliRetrieve, FixtureBIds) {
  const CliRun r = run_cli(with({"retrieve", "--algorithm", "ids"}, fixture_args("b")));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("task tree with 2 functional units (ids)\n", 0), 0u) << r.out;
  const auto tree = parse_foon(r.out.substr(r.out.find('\n') + 1));
  ASSERT_TRUE(tree.ok());
  ASSERT_EQ(tree.units.size(), 2u);
  EXPECT_EQ(tree.units[0].motion.label, "pour");
  EXPECT_EQ(tree.units[1].motion.label, "chill");
}

TEST(CliRetrieve, OutDotAndJsonFiles) {
  TempDir dir;
  const CliRun r = run_cli(with({"retrieve", "--algorithm", "gbfs-success", "--out", dir.file("tree.txt"),
                              "--dot", dir.file("tree.dot"), "--json", dir.file("r.json")},
                             fixture_args("a")));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "task tree with 1 functional unit (gbfs-success)\n");
  const auto tree = parse_foon(slurp(dir.file("tree.txt")));
  ASSERT_TRUE(tree.ok());
  EXPECT_EQ(tree.units[0].motion.label, "scoop");
  EXPECT_EQ(slurp(dir.file("tree.dot")).rfind("digraph foon {", 0), 0u);
  EXPECT_NE(slurp(dir.file("r.json")).find("\"outcome\": \"found\""), std::string::npos);
}

TEST(CliRetrieve, GoalAlreadySatisfied) {
  TempDir dir;
  std::ofstream(dir.file("goal.txt")) << "O\tcup\t0\nS\tempty\n";
  auto args = fixture_args("a");
  args[5] = dir.file("goal.txt");
  const CliRun r = run_cli(with({"retrieve", "--algorithm", "ids"}, args));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "goal already satisfied\n");
  const CliRun to_file =
      run_cli(with({"retrieve", "--algorithm", "ids", "--out", dir.file("tree.txt")}, args));
  EXPECT_EQ(to_file.code, 0);
  EXPECT_EQ(slurp(dir.file("tree.txt")), "");
}

TEST(CliRetrieve, WrittenTreesRevalidate) {
  TempDir dir;
  for (const char* name : {"a", "b", "d", "f", "chop_onion"}) {
    const auto f = load_fixture(name);
    for (const char* algorithm : {"ids", "gbfs-success", "gbfs-inputs"}) {
      const CliRun r = run_cli(
          with({"retrieve", "--algorithm", algorithm, "--out", dir.file("tree.txt")}, fixture_args(name)));
      ASSERT_EQ(r.code, 0) << name << " " << algorithm;
      const auto parsed = parse_foon(slurp(dir.file("tree.txt")));
      ASSERT_TRUE(parsed.ok());
      TaskTree tree{parsed.units, f.goal.key(), algorithm};
      EXPECT_TRUE(validate_tree(tree, f.graph, f.kitchen).valid) << name << " " << algorithm;
    }
  }
  // Fixture A with the input-count heuristic writes exactly the pour block.
  run_cli(with({"retrieve", "--algorithm", "gbfs-inputs", "--out", dir.file("a.txt")}, fixture_args("a")));
  const auto units = parse_foon(slurp(dir.file("a.txt"))).units;
  ASSERT_EQ(units.size(), 1u);
  EXPECT_EQ(canonical_unit_key(units[0]), canonical_unit_key(load_fixture("a").graph.unit(0)));
}

TEST(CliRetrieve, NotFoundExitsOne) {
  for (const char* algorithm : {"ids", "gbfs-success", "gbfs-inputs"}) {
    const CliRun r = run_cli(with({"retrieve", "--algorithm", algorithm}, fixture_args("c")));
    EXPECT_EQ(r.code, 1) << algorithm;
    EXPECT_EQ(r.out.rfind("no task tree found: ", 0), 0u) << r.out;
  }
  const CliRun shallow = run_cli(with({"retrieve", "--algorithm", "ids", "--max-depth", "1"}, fixture_args("b")));
  EXPECT_EQ(shallow.code, 1);
  const CliRun greedy = run_cli(
      with({"retrieve", "--algorithm", "gbfs-success", "--no-backtrack"}, fixture_args("f")));
  EXPECT_EQ(greedy.code, 1);
}

TEST(CliRetrieve, UnknownGoalExitsOne) {
  TempDir dir;
  std::ofstream(dir.file("goal.txt")) << "O\tteapot\t0\n";
  auto args = fixture_args("a");
  args[5] = dir.file("goal.txt");
  EXPECT_EQ(run_cli(with({"retrieve", "--algorithm", "ids"}, args)).code, 1);
}

TEST(CliRetrieve, InputErrorsExitTwo) {
  auto bad_kitchen = fixture_args("a");
  bad_kitchen[3] = fixture_path("bad/kitchen_with_motion.txt");
  EXPECT_EQ(run_cli(with({"retrieve", "--algorithm", "ids"}, bad_kitchen)).code, 2);

  auto bad_goal = fixture_args("a");
  bad_goal[5] = fixture_path("bad/goal_two_blocks.txt");
  EXPECT_EQ(run_cli(with({"retrieve", "--algorithm", "ids"}, bad_goal)).code, 2);

  for (const char* motions : {"bad/motions_out_of_range.txt", "bad/motions_non_numeric.txt"}) {
    auto args = fixture_args("a");
    args[7] = fixture_path(motions);
    EXPECT_EQ(run_cli(with({"retrieve", "--algorithm", "ids"}, args)).code, 2) << motions;
  }

  auto bad_universe = fixture_args("a");
  bad_universe[1] = fixture_path("bad/empty.txt");
  const CliRun r = run_cli(with({"retrieve", "--algorithm", "ids"}, bad_universe));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("empty universe"), std::string::npos);
}

TEST(CliRetrieve, StrictMotionsMissingRateExitsTwo) {
  TempDir dir;
  std::ofstream(dir.file("motions.txt")) << "pour\t0.6\n";
  auto args = fixture_args("a");
  args[7] = dir.file("motions.txt");
  EXPECT_EQ(run_cli(with({"retrieve", "--algorithm", "gbfs-success", "--strict-motions"}, args)).code, 2);
  // Falls back to the default rate when not strict.
  const CliRun lenient =
      run_cli(with({"retrieve", "--algorithm", "gbfs-success", "--default-rate", "0.5"}, args));
  EXPECT_EQ(lenient.code, 0);
  EXPECT_NE(lenient.out.find("M\tpour"), std::string::npos);
}

TEST(CliCompare, TableAndJson) {
  TempDir dir;
  const CliRun r = run_cli(with({"compare", "--json", dir.file("c.json")}, fixture_args("b")));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("goal: cup|contains{cold water}\n", 0), 0u);
  EXPECT_NE(r.out.find("0.7600"), std::string::npos);
  const std::string json = slurp(dir.file("c.json"));
  EXPECT_NE(json.find("\"fixture\": \"b.txt\""), std::string::npos);
  EXPECT_EQ(json.find("wall_ms"), std::string::npos);
}

TEST(CliCompare, TimingColumnOnRequest) {
  const CliRun r = run_cli(with({"compare", "--timing"}, fixture_args("b")));
  EXPECT_NE(r.out.find("wall ms"), std::string::npos);
}

TEST(CliCompare, AllNotFoundStillExitsZero) {
  const CliRun r = run_cli(with({"compare"}, fixture_args("c")));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("not-found"), std::string::npos);
}

TEST(CliDeterminism, RetrieveAndCompareAreByteStable) {
  TempDir dir;
  for (const char* name : {"a", "b", "d", "f"}) {
    for (const char* algorithm : {"ids", "gbfs-success", "gbfs-inputs"}) {
      const auto args = with({"retrieve", "--algorithm", algorithm, "--json", dir.file("1.json")},
                             fixture_args(name));
      auto again = args;
      again[4] = dir.file("2.json");
      const CliRun first = run_cli(args);
      const CliRun second = run_cli(again);
      EXPECT_EQ(first.out, second.out) << name << " " << algorithm;
      EXPECT_EQ(slurp(dir.file("1.json")), slurp(dir.file("2.json"))) << name << " " << algorithm;
    }
    const CliRun c1 = run_cli(with({"compare", "--json", dir.file("c1.json")}, fixture_args(name)));
    const CliRun c2 = run_cli(with({"compare", "--json", dir.file("c2.json")}, fixture_args(name)));
    EXPECT_EQ(c1.out, c2.out) << name;
    EXPECT_EQ(slurp(dir.file("c1.json")), slurp(dir.file("c2.json"))) << name;
  }
}

// The installed binary maps outcomes to process exit codes.
int exit_code_of(const std::string& args) {
  const std::string command = std::string(FOON_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string joined(const std::vector<std::string>& args) {
  std::string out;
  for (const auto& a : args) out += " '" + a + "'";
  return out;
}

TEST(CliBinary, ExitCodes) {
  EXPECT_EQ(exit_code_of("validate " + fixture_path("chop_onion.txt")), 0);
  EXPECT_EQ(exit_code_of("retrieve --algorithm ids" + joined(fixture_args("c"))), 1);
  EXPECT_EQ(exit_code_of("validate " + fixture_path("bad/s_before_o.txt")), 2);
  EXPECT_EQ(exit_code_of("retrieve"), 3);
  EXPECT_EQ(exit_code_of("compare" + joined(fixture_args("a"))), 0);
}

}  // namespace
}  // namespace foon
