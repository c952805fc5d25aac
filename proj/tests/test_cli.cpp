#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + BERGMAN_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("bergman_cli_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Cli, SAlphaJson) {
  const auto r = run("s-alpha --domain disc --alpha 1 --N 1000 --format json --no-timestamp");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  const double v = j["result"]["value"];
  EXPECT_NEAR(v, 1.0 - 1.0 / 1002, 1e-12);
  EXPECT_EQ(j["config"]["command"], "s-alpha");
  EXPECT_EQ(j["config"]["domain"], "disc");
  EXPECT_EQ(j["config"]["N"], 1000);
  EXPECT_EQ(j["config"]["seed"], 1);
  EXPECT_FALSE(j.contains("timestamp"));
}

TEST(Cli, TimestampByDefault) {
  const auto j = nlohmann::json::parse(run("norms --gamma 2").out);
  EXPECT_TRUE(j.contains("timestamp"));
}

TEST(Cli, DiagonalCsvHasSixIncreasingRows) {
  const auto r = run("diagonal --domain polydisc:2 --alpha 1,1 --N-grid 100:3200:x2 --format csv --no-timestamp");
  ASSERT_EQ(r.status, 0);
  std::istringstream in(r.out);
  std::string line;
  std::vector<double> values;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      EXPECT_EQ(line, "N,value,alpha,domain,kind");
      header_seen = true;
      continue;
    }
    values.push_back(std::stod(line.substr(line.find(',') + 1)));
  }
  ASSERT_EQ(values.size(), 6u);
  for (std::size_t i = 1; i < values.size(); ++i) EXPECT_GT(values[i], values[i - 1]);
}

TEST(Cli, NormsBallVolume) {
  const auto r = run("norms --domain ellipsoid:1,1 --gamma 0,0 --no-timestamp");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["result"]["log_c_squared"].get<double>(), std::log(M_PI * M_PI / 2), 1e-15);
}

TEST(Cli, ByteIdenticalAcrossRunsAndThreads) {
  const std::string args = "s-alpha --domain ellipsoid:2,3 --alpha 1,1 --N-grid 10:80:x2 --no-timestamp --format csv";
  const auto a = run(args + " --threads 1");
  const auto b = run(args + " --threads 4");
  const auto c = run(args + " --threads 4");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(b.out, c.out);
}

TEST(Cli, UsageErrorsNameTheFlag) {
  const std::string cmd = std::string(BERGMAN_CLI_PATH) + " s-alpha --domain ellipsoid:1,-2 --alpha 1,0 --N 5 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  std::array<char, 1024> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  EXPECT_EQ(WEXITSTATUS(pclose(pipe)), 2);
  EXPECT_NE(out.find("--domain"), std::string::npos) << out;

  EXPECT_EQ(run("s-alpha --alpha 1,0 --N 5").status, 2);          // dimension mismatch
  EXPECT_EQ(run("s-alpha --alpha 1 --N-grid 5:1:x2").status, 2);  // bad grid
  EXPECT_EQ(run("s-alpha --alpha 1").status, 2);                   // no N
  EXPECT_EQ(run("s-alpha --alpha 1 --N 4 --format xml").status, 2);
  EXPECT_EQ(run("nonsense").status, 2);
  EXPECT_EQ(run("").status, 2);
}

TEST(Cli, CapabilityErrorNamesVariant) {
  const std::string cmd =
      std::string(BERGMAN_CLI_PATH) + " oracle --domain polydisc:2 --gamma 1,1 --method quadrature 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  std::array<char, 1024> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  EXPECT_EQ(WEXITSTATUS(pclose(pipe)), 3);
  EXPECT_NE(out.find("polydisc"), std::string::npos) << out;
}

TEST(Cli, OracleRecordHasAllFields) {
  const auto r = run("oracle --domain ellipsoid:2,3 --gamma 1,0 --method monte-carlo --samples 100000 --seed 5 "
                     "--no-timestamp --threads 2");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out)["result"];
  for (const char* key : {"value", "abs_error", "method", "sample_count", "seed", "closed_form"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["seed"], 5);
  EXPECT_LE(std::abs(j["value"].get<double>() - j["closed_form"].get<double>()), j["abs_error"].get<double>());
}

TEST(Cli, Divergence) {
  auto j = nlohmann::json::parse(
      run("divergence --domain polydisc:2 --alpha 1,0 --N-grid 100:3200:x1.41421356237 --no-timestamp").out);
  EXPECT_EQ(j["result"]["fit"]["verdict"], "DivergesLinearly");
  j = nlohmann::json::parse(
      run("divergence --domain disc --alpha 1 --kind partial --N-grid 10:10000:x2 --no-timestamp").out);
  EXPECT_EQ(j["result"]["fit"]["verdict"], "Converges");
  EXPECT_EQ(run("divergence --domain disc --alpha 1 --N-grid 10:40:x2").status, 2);
}

TEST(Cli, SymbolCommands) {
  const auto path = temp_file("symbol.tsv");
  {
    std::ofstream f(path);
    f << "# z + z^3\n1\t1\n3\t1\n";
  }
  auto j = nlohmann::json::parse(run("disc-dirichlet --symbol-file " + path.string() + " --no-timestamp").out);
  EXPECT_NEAR(j["result"]["hs_limit"].get<double>(), 4, 1e-14);
  EXPECT_NEAR(j["result"]["dirichlet_over_pi"].get<double>(), 4, 1e-13);

  j = nlohmann::json::parse(run("hs-norm --symbol-file " + path.string() + " --N 1000 --no-timestamp").out);
  EXPECT_NEAR(j["result"]["points"][0]["value"].get<double>(), 4, 0.01);
  std::filesystem::remove(path);
  EXPECT_EQ(run("disc-dirichlet --symbol-file /nonexistent/file").status, 2);
}

TEST(Cli, Dbar) {
  const auto j = nlohmann::json::parse(run("dbar --domain ellipsoid:1,1 --N 200 --no-timestamp").out);
  ASSERT_EQ(j["result"]["entries"].size(), 2u);
  EXPECT_GE(j["result"]["entries"][1]["value"].get<double>(), 200.0 / 15);
}

TEST(Cli, ValidatePassesOnSupportedDomains) {
  for (const char* d : {"disc", "ellipsoid:1.5,0.75", "polydisc:2"}) {
    const auto r = run(std::string("validate --domain ") + d + " --samples 200000 --max-order 4 --no-timestamp");
    EXPECT_EQ(r.status, 0) << d;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["result"]["passed"].get<bool>()) << d;
  }
  const auto j = nlohmann::json::parse(run("validate --domain polydisc:2 --samples 100000 --no-timestamp").out);
  ASSERT_EQ(j["result"]["skipped"].size(), 1u);
  EXPECT_NE(j["result"]["skipped"][0].get<std::string>().find("polydisc"), std::string::npos);
}

TEST(Cli, OutputFileAndNormCache) {
  const auto out = temp_file("out.json");
  const auto cache = temp_file("cache.tsv");
  const std::string env = "BERGMAN_NORM_CACHE=" + cache.string();
  ASSERT_EQ(run("norms --domain ellipsoid:2,3 --max-order 3 --no-timestamp --output " + out.string(), env).status, 0);
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  const auto j = nlohmann::json::parse(text.str());
  EXPECT_EQ(j["result"]["norms"].size(), 10u);

  std::ifstream c(cache);
  std::size_t lines = 0;
  for (std::string line; std::getline(c, line);) ++lines;
  EXPECT_EQ(lines, 10u);
  // a second run served from the cache prints the same bytes
  const auto first = run("norms --domain ellipsoid:2,3 --max-order 3 --no-timestamp", env);
  const auto second = run("norms --domain ellipsoid:2,3 --max-order 3 --no-timestamp");
  EXPECT_EQ(first.out, second.out);
  std::filesystem::remove(out);
  std::filesystem::remove(cache);
}
