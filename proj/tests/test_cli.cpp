// Runs the command-line binary end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Result {
  int status = -1;
  std::string output;  // stdout and stderr
};

Result cli(const std::string& args) {
  const std::string command = std::string(CLICKBANDIT_CLI) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) r.output.append(buffer, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("clickbandit_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

TEST(Cli, Bound) {
  const auto r = cli("bound --K 5 --L 10 --T 10000000 --alpha-max 0.9 --delta-min 0.05");
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("log_term      773668591.24"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("constant_term 2630.969097"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("total         773671222.21"), std::string::npos) << r.output;
  EXPECT_NE(cli("bound --K 5 --L 10 --T 1e7 --alpha-max 1 --delta-min 0.05").status, 0);
}

TEST(Cli, UnknownFlagPrintsUsage) {
  const auto r = cli("bound --K 5 --L 10 --T 100 --alpha-max 0.5 --delta-min 0.1 --frobnicate");
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("Usage"), std::string::npos) << r.output;
  EXPECT_NE(cli("").status, 0);
  EXPECT_NE(cli("launch").status, 0);
}

TEST(Cli, MalformedConfigReportsLine) {
  const auto dir = scratch("bad");
  write(dir / "bad.cfg", "model = cm\nalpha = 0.5, 0.3\nK = one\nT = 100\nalgorithm = batchrank\n");
  const auto r = cli("run --config " + (dir / "bad.cfg").string() + " --out " + (dir / "o").string());
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("bad.cfg:3:"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(dir / "o" / "results.csv"));
}

TEST(Cli, OptimalStubGivesZeroCsv) {
  const auto dir = scratch("optimal");
  write(dir / "opt.cfg",
        "label = opt\nmodel = pbm\nalpha = 0.2,0.7,0.4\nchi = 1,0.5\nT = 5000\n"
        "algorithm = optimal\nseeds = 1,2\nwindow = 1000\n");
  const auto r = cli("run --config " + (dir / "opt.cfg").string() + " --out " + (dir / "o").string());
  ASSERT_EQ(r.status, 0) << r.output;
  std::istringstream csv(read_file(dir / "o" / "results.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_TRUE(line.ends_with(",0,0")) << line;
  }
  EXPECT_EQ(rows, 10);
}

TEST(Cli, RepeatedRunsAreIdentical) {
  const auto dir = scratch("repeat");
  write(dir / "a.cfg",
        "label = rep\nmodel = cm\nalpha = 0.8,0.6,0.3,0.1\nK = 2\nT = 20000\n"
        "algorithm = batchrank\nseeds = 0\nwindow = 2000\n");
  const std::string base = "run --config " + (dir / "a.cfg").string() + " --seed 7 --out ";
  ASSERT_EQ(cli(base + (dir / "one").string()).status, 0);
  ASSERT_EQ(cli(base + (dir / "two").string() + " --parallelism 2").status, 0);
  EXPECT_EQ(read_file(dir / "one" / "results.csv"), read_file(dir / "two" / "results.csv"));
  EXPECT_EQ(read_file(dir / "one" / "events.csv"), read_file(dir / "two" / "events.csv"));
  EXPECT_NE(read_file(dir / "one" / "results.csv").find("rep-batchrank-s7"), std::string::npos);
}

TEST(Cli, GenerateSweepAndPlot) {
  const auto dir = scratch("pipeline");
  auto r = cli("gen-queries --out " + (dir / "q").string() +
               " --count 2 --model pbm --L 4 --K 2 --T 3000 --window 1000 "
               "--algorithms batchrank,cascadeklucb,rankedexp3 --seeds-per-query 2");
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(fs::exists(dir / "q" / "q001_cascadeklucb.cfg"));
  r = cli("sweep --config " + (dir / "q").string() + " --out " + (dir / "s").string() +
          " --parallelism 2 --bins 0,0.001,1");
  ASSERT_EQ(r.status, 0) << r.output;
  const std::string hist = read_file(dir / "s" / "histogram.csv");
  EXPECT_NE(hist.find("rankedexp3,pbm,0.001,1,"), std::string::npos) << hist;
  r = cli("plot " + (dir / "s" / "results.csv").string() + " --out " + (dir / "p").string() +
          " --log-y --bins 4");
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(read_file(dir / "p" / "regret.svg").find("cascadeklucb"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "p" / "histogram.svg"));
  r = cli("plot --out " + (dir / "p2").string());
  EXPECT_NE(r.status, 0);
}

}  // namespace
