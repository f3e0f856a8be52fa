#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "logicsim/cli.hpp"

using namespace logicsim;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "", cli::ServeHook hook = {}) {
  args.insert(args.begin(), "logicsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), {in, out, err}, hook);
  return {code, out.str(), err.str()};
}

std::string sample(const char* name) { return std::string(LOGICSIM_SAMPLES_DIR) + "/" + name; }
std::string fixture(const char* name) { return std::string(LOGICSIM_FIXTURES_DIR) + "/" + name; }

}  // namespace

TEST(Cli, EvalHalfAdder) {
  auto r = run({"eval", sample("half_adder.lgc"), "--set", "A=1", "--set", "B=1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "S: off\nC0: on\n");
  EXPECT_EQ(r.err, "");
  r = run({"eval", sample("half_adder.lgc"), "--set", "A=1"});
  EXPECT_EQ(r.out, "S: on\nC0: off\n");
}

TEST(Cli, TableHalfAdder) {
  auto r = run({"table", sample("half_adder.lgc")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "A B | S C0\n"
            "0 0 | 0 0\n"
            "0 1 | 1 0\n"
            "1 0 | 1 0\n"
            "1 1 | 0 1\n");
}

TEST(Cli, TableCsvAndGates) {
  EXPECT_EQ(run({"table", sample("and_gate.lgc"), "--format", "csv"}).out, "A,B,Y\n0,0,0\n0,1,0\n1,0,0\n1,1,1\n");
  EXPECT_EQ(run({"table", sample("or_gate.lgc"), "--format=csv"}).out, "A,B,Y\n0,0,0\n0,1,1\n1,0,1\n1,1,1\n");
}

TEST(Cli, TableCap) {
  auto r = run({"table", sample("half_adder.lgc"), "--cap", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, XorDecompositionMatchesXor) {
  auto direct = run({"table", fixture("xor_direct.lgc")});
  auto nands = run({"table", fixture("xor_nand_decomposition.lgc")});
  EXPECT_EQ(direct.code, 0);
  EXPECT_EQ(direct.out, nands.out);
}

TEST(Cli, CheckReportsDiagnostics) {
  auto clean = run({"check", sample("half_adder.lgc")});
  EXPECT_EQ(clean.code, 0);
  EXPECT_EQ(clean.out, "");

  auto loop = run({"check", fixture("nand_self_loop.lgc")});
  EXPECT_EQ(loop.code, 2);
  EXPECT_EQ(loop.out, "combinational cycle: G\n");

  auto floating = run({"check", fixture("missing_wire.lgc")});
  EXPECT_EQ(floating.code, 2);
  EXPECT_EQ(floating.out, "floating input: G.in1\n");
}

TEST(Cli, EvalWarnsAndStrictFails) {
  auto r = run({"eval", fixture("nand_self_loop.lgc")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Q: undefined\n");
  EXPECT_EQ(r.err, "warning: combinational cycle: G\n");
  EXPECT_EQ(run({"eval", fixture("nand_self_loop.lgc"), "--strict"}).code, 2);
  EXPECT_EQ(run({"eval", sample("half_adder.lgc"), "--strict"}).code, 0);
}

TEST(Cli, BadOverrides) {
  EXPECT_EQ(run({"eval", sample("half_adder.lgc"), "--set", "X=1"}).code, 1);
  EXPECT_EQ(run({"eval", sample("half_adder.lgc"), "--set", "Q=1"}).code, 1);
  EXPECT_EQ(run({"eval", sample("half_adder.lgc"), "--set", "A=2"}).code, 1);
  EXPECT_EQ(run({"eval", sample("half_adder.lgc"), "--set", "A"}).code, 1);
}

TEST(Cli, ParseErrorsPointAtSource) {
  auto r = run({"check", "-"}, "gate G and\ngate G or\n");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("<stdin>:2:6: error: ", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("[duplicate_name]"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"eval"}).code, 1);
  EXPECT_EQ(run({"eval", "/no/such/file.lgc"}).code, 1);
  EXPECT_EQ(run({"table", sample("half_adder.lgc"), "--format", "xml"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"serve"}).code, 1);  // no hook installed
}

TEST(Cli, FmtCanonicalAndIdempotent) {
  auto once = run({"fmt", fixture("half_adder_shuffled.lgc")});
  EXPECT_EQ(once.code, 0);
  auto twice = run({"fmt", "-"}, once.out);
  EXPECT_EQ(twice.out, once.out);
}

TEST(Cli, FmtWrite) {
  auto path = std::filesystem::temp_directory_path() / ("logicsim-fmt-" + std::to_string(std::random_device{}()) + ".lgc");
  std::ofstream(path) << "gate   G   and   # c\n";
  EXPECT_EQ(run({"fmt", "-w", path.string()}).code, 0);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(text, "gate G and\n");
  std::filesystem::remove(path);
  EXPECT_EQ(run({"fmt", "--write", "-"}, "gate G and\n").code, 1);
}

TEST(Cli, ServeOptionsAndEnvironment) {
  cli::ServeOptions seen;
  auto hook = [&](const cli::ServeOptions& o, cli::Streams) {
    seen = o;
    return 0;
  };
  ::setenv("LOGICSIM_DATA_DIR", "/tmp/from-env", 1);
  ::setenv("LOGICSIM_TABLE_CAP", "9", 1);
  EXPECT_EQ(run({"serve", "--addr", "0.0.0.0:9000"}, "", hook).code, 0);
  EXPECT_EQ(seen.addr, "0.0.0.0:9000");
  EXPECT_EQ(seen.data_dir, "/tmp/from-env");
  EXPECT_EQ(seen.table_cap, 9u);
  EXPECT_EQ(run({"serve", "--data-dir", "flag"}, "", hook).code, 0);
  EXPECT_EQ(seen.data_dir, "flag");
  ::unsetenv("LOGICSIM_DATA_DIR");
  ::unsetenv("LOGICSIM_TABLE_CAP");
  EXPECT_EQ(run({"serve"}, "", hook).code, 0);
  EXPECT_EQ(seen.addr, "127.0.0.1:8080");
  EXPECT_EQ(seen.data_dir, "circuits");
}
