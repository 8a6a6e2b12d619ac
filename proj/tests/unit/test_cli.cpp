// Drives the gpce executable end to end.
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(GPCE_CLI_PATH) + " " + args;
  if (args.find(" > ") == std::string::npos) cmd += " >/dev/null";
  cmd += " 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gpce_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

const char* kMinimal = R"([problem]
name = ishigami
[study]
schemes = random
repetitions = 2
n_test = 500
[grid]
values = 10, 20, 30
[seeds]
master = 9
)";

}  // namespace

TEST_F(CliTest, BenchWritesFourFilesDeterministically) {
  std::ofstream(dir_ / "s.ini") << kMinimal;
  ASSERT_EQ(run("bench --config " + (dir_ / "s.ini").string() + " --out " + (dir_ / "a").string()), 0);
  for (auto f : {"records.csv", "summary.csv", "success_rates.csv", "manifest.json"})
    EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
  ASSERT_EQ(run("bench --config " + (dir_ / "s.ini").string() + " --out " + (dir_ / "b").string() +
                " --jobs 2"),
            0);
  EXPECT_EQ(slurp(dir_ / "a" / "records.csv"), slurp(dir_ / "b" / "records.csv"));
  EXPECT_NE(slurp(dir_ / "a" / "manifest.json").find("\"status\": \"ok\""), std::string::npos);
}

TEST_F(CliTest, BenchRejectsBadScheme) {
  std::string text = kMinimal;
  text.replace(text.find("schemes = random"), 16, "schemes = sobol");
  std::ofstream(dir_ / "bad.ini") << text;
  EXPECT_EQ(run("bench --config " + (dir_ / "bad.ini").string() + " --out " + (dir_ / "o").string()), 1);
  EXPECT_EQ(run("bench --out " + (dir_ / "o").string()), 1);
  EXPECT_EQ(run("frobnicate"), 1);
}

TEST_F(CliTest, SampleLhsIsStratified) {
  ASSERT_EQ(run("sample --scheme lhs-std -m 4 -d 2 --seed 3 --out " + (dir_ / "s.csv").string()), 0);
  std::ifstream in(dir_ / "s.csv");
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<int>> bins(2, std::vector<int>(4, 0));
  int rows = 0;
  while (std::getline(in, line)) {
    double a, b;
    char comma;
    std::istringstream ls(line);
    ls >> a >> comma >> b;
    ++bins[0][static_cast<int>(a * 4)];
    ++bins[1][static_cast<int>(b * 4)];
    ++rows;
  }
  EXPECT_EQ(rows, 4);
  for (const auto& col : bins)
    for (int c : col) EXPECT_EQ(c, 1);
}

TEST_F(CliTest, CoherenceSchemesNeedBasis) {
  EXPECT_EQ(run("sample --scheme co -m 10 -d 2"), 1);
  EXPECT_EQ(run("sample --scheme co -m 10 -d 2 --order 3 --interaction 2 --out " + (dir_ / "c.csv").string()), 0);
  EXPECT_EQ(run("sample --scheme greedy-mc -m 10 --problem ishigami --out " + (dir_ / "g.csv").string()), 0);
}

TEST_F(CliTest, FitPredictMoments) {
  auto model = (dir_ / "m.json").string();
  ASSERT_EQ(run("fit --problem ishigami -m 60 --seed 2 --out " + model), 0);
  std::ofstream(dir_ / "in.csv") << "x1,x2\n0.1,0.2\n-1.0,2.0\n";
  EXPECT_EQ(run("predict --model " + model + " --points " + (dir_ / "in.csv").string() + " --out " +
                (dir_ / "p.csv").string()),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "p.csv"));
  std::ofstream(dir_ / "out.csv") << "0.1,0.2\n5.0,0.0\n";
  EXPECT_EQ(run("predict --model " + model + " --points " + (dir_ / "out.csv").string()), 2);
  EXPECT_EQ(run("moments --model " + model), 0);
  EXPECT_EQ(run("moments --model " + (dir_ / "missing.json").string()), 1);
}

TEST_F(CliTest, FitThenMomentsNearAnalyticMean) {
  auto model = (dir_ / "m.json").string();
  ASSERT_EQ(run("fit --problem ishigami -m 200 --seed 4 --out " + model), 0);
  ASSERT_EQ(run("moments --model " + model + " > " + (dir_ / "mom.csv").string()), 0);
  std::string text = slurp(dir_ / "mom.csv");
  ASSERT_EQ(text.substr(0, text.find('\n')), "qoi,mean,std");
  std::istringstream row(text.substr(text.find('\n') + 1));
  int q;
  double mean, sd;
  char c1, c2;
  row >> q >> c1 >> mean >> c2 >> sd;
  EXPECT_NEAR(mean, 3.5, 1e-2);
  EXPECT_NEAR(sd, 2.5942, 1e-2);
}

TEST_F(CliTest, GreedySampleWritesOrderColumn) {
  ASSERT_EQ(run("sample --scheme greedy-mc -m 8 --problem ishigami --out " + (dir_ / "g.csv").string()), 0);
  std::string text = slurp(dir_ / "g.csv");
  std::string header = text.substr(0, text.find('\n'));
  EXPECT_NE(header.find("order"), std::string::npos) << header;
}
