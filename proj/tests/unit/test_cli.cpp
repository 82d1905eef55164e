#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kSmall = "run --synthetic 30,4,4,1 --repeats 3";

}  // namespace

TEST(Cli, Help) { EXPECT_EQ(run_cli("--help"), 0); }

TEST(Cli, RunsEveryFormat) {
  for (const char* f : {"json", "table", "csv"}) EXPECT_EQ(run_cli(kSmall + " --format " + f), 0) << f;
  EXPECT_EQ(run_cli(kSmall + " --method full,split,interp,smooth,oracle,ridge-exact"), 0);
  EXPECT_EQ(run_cli(kSmall + " --model lasso --method full"), 0);
  EXPECT_EQ(run_cli(kSmall + " --model knn --k 5 --method full --method split"), 0);
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run_cli(kSmall + " --bogus"), 2);
  EXPECT_EQ(run_cli(kSmall + " --method nope"), 2);
  EXPECT_EQ(run_cli(kSmall + " --alpha 1.5"), 2);
  EXPECT_EQ(run_cli("run --synthetic 30,4"), 2);
  EXPECT_EQ(run_cli("run --data /nonexistent.csv --repeats 2"), 2);
  EXPECT_EQ(run_cli(kSmall + " --model lasso --method ridge-exact"), 2);
}

TEST(Cli, InitializationFailureExitsThree) {
  // With 29 observed rows no candidate can reach typicalness 0.99.
  EXPECT_EQ(run_cli(kSmall + " --alpha 0.99 --method full"), 3);
}

TEST(Cli, WritesOutputFile) {
  const auto dir = std::filesystem::temp_directory_path() / "rootcp_cli_test";
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.json", b = dir / "b.json";
  ASSERT_EQ(run_cli(kSmall + " --seed 3 --out " + a.string()), 0);
  ASSERT_EQ(run_cli(kSmall + " --seed 3 --out " + b.string()), 0);
  const std::string text = slurp(a);
  EXPECT_NE(text.find("\"per_rep\""), std::string::npos);
  EXPECT_EQ(text, slurp(b));
  std::filesystem::remove_all(dir);
}

TEST(Cli, ReadsCsv) {
  const auto path = std::filesystem::temp_directory_path() / "rootcp_cli_data.csv";
  {
    std::ofstream out(path);
    out << "a,b,y\n";
    for (int i = 0; i < 25; ++i) out << i % 7 << "," << (i * 3) % 5 << "," << i % 7 + 0.5 * ((i * 3) % 5) + 0.1 * (i % 3) << "\n";
  }
  EXPECT_EQ(run_cli("run --data " + path.string() + " --repeats 3 --format table"), 0);
  std::filesystem::remove(path);
}
