#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "test_support.hpp"

using namespace metricspace;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string output;
};

RunResult run_command(const std::string& command) {
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return {};
  std::string out;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) out.append(buffer, got);
  const int status = pclose(pipe);
  RunResult result;
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.output = out;
  return result;
}

RunResult run(const std::string& args) {
  return run_command(std::string(CLI_BINARY) + " " + args + " 2>/dev/null");
}

RunResult run_with_env(const std::string& env, const std::string& args) {
  return run_command(env + " " + std::string(CLI_BINARY) + " " + args + " 2>/dev/null");
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = std::filesystem::temp_directory_path() /
           (std::string("metricspace_cli_") + info->name());
    std::filesystem::create_directories(dir_);
  }

  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Two-point spaces at distances 2 and 6: polygon with n = 2 puts the
  // vertices diametrically opposite, so the spacing is exactly 2 * radius.
  std::string pair_space(double radius, const std::string& name) {
    const std::string file = path(name);
    EXPECT_EQ(run("gen polygon --n 2 --radius " + format_double(radius) + " -o " + file).code, 0);
    return file;
  }

  std::string geomprog_space() {
    const std::string file = path("gp.json");
    EXPECT_EQ(run("gen geomprog --p 2 --count 4 -o " + file).code, 0);
    return file;
  }

  std::filesystem::path dir_;
};

}  // namespace

TEST_F(CliTest, GenRoundTripIsByteIdentical) {
  const std::string file = path("polygon.json");
  ASSERT_EQ(run("gen polygon --n 5 --radius 2 -o " + file).code, 0);
  const std::string text = read_text_file(file);
  const FiniteMetricSpace space = space_from_json(json::parse(text));
  EXPECT_EQ(space_to_json(space).dump(2) + "\n", text);

  const std::string csv = path("grid.csv");
  ASSERT_EQ(run("gen grid --length 1 --step 0.5 -o " + csv).code, 0);
  const std::string csv_text = read_text_file(csv);
  EXPECT_EQ(space_to_csv(space_from_csv(csv_text)), csv_text);
}

TEST_F(CliTest, GenMatchesLibraryAndIsDeterministic) {
  const std::string args = "gen random --n 4 --dim 2 --seed 9";
  const RunResult first = run(args);
  const RunResult second = run(args);
  ASSERT_EQ(first.code, 0);
  EXPECT_EQ(first.output, second.output);
  EXPECT_EQ(first.output, space_to_json(random_euclidean(4, 2, 9)).dump(2) + "\n");
}

TEST_F(CliTest, ValidateAcceptsAndRejects) {
  const std::string good = path("good.json");
  ASSERT_EQ(run("gen random --n 4 --dim 2 --seed 7 -o " + good).code, 0);
  EXPECT_EQ(run("validate " + good).code, 0);

  const std::string bad = path("bad.json");
  write_text_file(bad, json{{"labels", {"a", "b", "c"}},
                            {"matrix", {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}}}
                           .dump());
  const RunResult plain = run("validate " + bad);
  EXPECT_EQ(plain.code, 1);

  const RunResult as_json = run("validate " + bad + " --json");
  EXPECT_EQ(as_json.code, 1);
  const json report = json::parse(as_json.output);
  EXPECT_FALSE(report["ok"].get<bool>());
  ASSERT_FALSE(report["violations"].empty());
  EXPECT_EQ(report["violations"][0]["kind"], "triangle");
}

TEST_F(CliTest, UltraEmitsMergedClasses) {
  const std::string file = geomprog_space();
  const RunResult result = run("ultra " + file + " --json");
  ASSERT_EQ(result.code, 0);
  const json doc = json::parse(result.output);
  ASSERT_EQ(doc["classes"].size(), 4u);
  EXPECT_EQ(doc["classes"][0], json::array({"p0"}));
  EXPECT_DOUBLE_EQ(doc["matrix"][0][3].get<double>(), 8.0);

  const RunResult text = run("ultra " + file);
  ASSERT_EQ(text.code, 0);
  EXPECT_NE(text.output.find('8'), std::string::npos);
}

TEST_F(CliTest, BottleneckValue) {
  const std::string file = geomprog_space();
  const RunResult plain = run("bottleneck " + file);
  ASSERT_EQ(plain.code, 0);
  EXPECT_EQ(plain.output, "8\n");

  const RunResult as_json = run("bottleneck " + file + " --json");
  ASSERT_EQ(as_json.code, 0);
  EXPECT_DOUBLE_EQ(json::parse(as_json.output)["bottleneck"].get<double>(), 8.0);
}

TEST_F(CliTest, ChainConnectivityModes) {
  const std::string file = geomprog_space();
  EXPECT_EQ(run("chain " + file + " --eps 4").output, "disconnected at scale 4\n");
  EXPECT_EQ(run("chain " + file + " --eps 8").output, "connected at scale 8\n");

  const json parts = json::parse(run("chain " + file + " --eps 4 --components --json").output);
  EXPECT_DOUBLE_EQ(parts["scale"].get<double>(), 4.0);
  ASSERT_EQ(parts["components"].size(), 2u);
  EXPECT_EQ(parts["components"][0], json::array({"p0", "p1", "p2"}));

  // Hop-minimal chain: p0 -> p2 (step 6) -> p3 (step 8), both within scale 8.
  const json found = json::parse(run("chain " + file + " --eps 8 --witness p0 p3 --json").output);
  EXPECT_TRUE(found["found"].get<bool>());
  EXPECT_EQ(found["chain"], json::array({"p0", "p2", "p3"}));
  EXPECT_DOUBLE_EQ(found["max_step"].get<double>(), 8.0);

  const json missing = json::parse(run("chain " + file + " --eps 4 --witness p0 p3 --json").output);
  EXPECT_FALSE(missing["found"].get<bool>());
}

TEST_F(CliTest, GhExactAndBounds) {
  const std::string x = pair_space(1, "x.json");
  const std::string y = pair_space(3, "y.json");

  const RunResult text = run("gh " + x + " " + y);
  ASSERT_EQ(text.code, 0);
  EXPECT_EQ(text.output.rfind("d_GH = 2 (exact", 0), 0u);

  const json exact = json::parse(run("gh " + x + " " + y + " --exact --json").output);
  EXPECT_DOUBLE_EQ(exact["lower"].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(exact["upper"].get<double>(), 2.0);
  EXPECT_TRUE(exact["exact"].get<bool>());
  EXPECT_FALSE(exact["timed_out"].get<bool>());
  ASSERT_TRUE(exact["witness"].is_array());
  EXPECT_EQ(exact["witness"].size(), 2u);

  const json bounds = json::parse(run("gh " + x + " " + y + " --bounds --json").output);
  EXPECT_FALSE(bounds["exact"].get<bool>());
  EXPECT_DOUBLE_EQ(bounds["lower"].get<double>(), 2.0);
  EXPECT_DOUBLE_EQ(bounds["upper"].get<double>(), 3.0);
  EXPECT_LE(bounds["lower"].get<double>(), exact["upper"].get<double>());
}

TEST_F(CliTest, GhBudgetExhaustionStaysExitZero) {
  const std::string x = path("x5.json");
  const std::string y = path("y5.json");
  ASSERT_EQ(run("gen random --n 5 --dim 3 --seed 1 -o " + x).code, 0);
  ASSERT_EQ(run("gen random --n 5 --dim 3 --seed 2 -o " + y).code, 0);

  const RunResult result = run("gh " + x + " " + y + " --exact --max-nodes 1 --json");
  ASSERT_EQ(result.code, 0);
  const json doc = json::parse(result.output);
  EXPECT_FALSE(doc["exact"].get<bool>());
  EXPECT_TRUE(doc["timed_out"].get<bool>());
  EXPECT_LE(doc["lower"].get<double>(), doc["upper"].get<double>());
  EXPECT_FALSE(doc["witness"].is_null());
}

TEST_F(CliTest, ProductMetricsAndCap) {
  const std::string x = pair_space(1, "x.json");
  const std::string y = pair_space(3, "y.json");

  const json l1 = json::parse(run("product " + x + " " + y + " --metric l1").output);
  EXPECT_EQ(l1["labels"], json::array({"p0|p0", "p0|p1", "p1|p0", "p1|p1"}));
  EXPECT_DOUBLE_EQ(l1["matrix"][0][3].get<double>(), 8.0);

  const json linf = json::parse(run("product " + x + " " + y + " --metric linf").output);
  EXPECT_DOUBLE_EQ(linf["matrix"][0][3].get<double>(), 6.0);

  const std::string big = path("big.json");
  ASSERT_EQ(run("gen polygon --n 101 --radius 1 -o " + big).code, 0);
  EXPECT_EQ(run("product " + big + " " + big + " --metric l1").code, 2);
}

TEST_F(CliTest, DtSamplesAndConnectivity) {
  const std::string x = pair_space(1, "x.json");
  const RunResult result = run("dt " + x + " --t 2 --step 1 --check-connect 2");
  ASSERT_EQ(result.code, 0);
  const json doc = json::parse(result.output);
  ASSERT_EQ(doc["origins"].size(), 3u);
  EXPECT_EQ(doc["origins"][0], 0);
  EXPECT_EQ(doc["origins"][1], 1);
  EXPECT_DOUBLE_EQ(doc["origins"][2]["s"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(doc["matrix"][0][2].get<double>(), 1.0);
  EXPECT_TRUE(doc["connected"].get<bool>());
}

TEST_F(CliTest, ErrorExitCodes) {
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("validate /nonexistent/space.json").code, 1);
  EXPECT_EQ(run("").code, 1);  // a subcommand is required

  const std::string x = pair_space(1, "x.json");
  EXPECT_EQ(run("gh " + x + " " + x + " --exact --bounds").code, 1);

  const std::string bad = path("bad.json");
  write_text_file(bad, json{{"labels", {"a", "b"}}, {"matrix", {{0, 1}, {2, 0}}}}.dump());
  EXPECT_EQ(run("ultra " + bad).code, 1);
}

TEST_F(CliTest, ConfigEnvironmentVariable) {
  const std::string file = geomprog_space();
  const std::string config = path("config.json");
  write_text_file(config, "{\"json\": true}\n");
  const RunResult result = run_with_env("METRICSPACE_CONFIG=" + config, "bottleneck " + file);
  ASSERT_EQ(result.code, 0);
  EXPECT_DOUBLE_EQ(json::parse(result.output)["bottleneck"].get<double>(), 8.0);

  const std::string broken = path("broken.json");
  write_text_file(broken, "{oops");
  EXPECT_EQ(run_with_env("METRICSPACE_CONFIG=" + broken, "bottleneck " + file).code, 1);
}

TEST_F(CliTest, HelpExitsCleanly) {
  const RunResult result = run("--help");
  EXPECT_EQ(result.code, 0);
  EXPECT_NE(result.output.find("gh"), std::string::npos);
}
