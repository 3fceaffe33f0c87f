#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, tentative::cli::Environment env = {}) {
  std::ostringstream out, err;
  const int code = tentative::cli::run(args, out, err, env);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Report text without the line echoing the command-line flags.
std::string without_flags(const std::string& s) {
  std::istringstream in(s);
  std::string line, kept;
  while (std::getline(in, line))
    if (line.rfind("flags:", 0) != 0 && line.rfind("manifest.flags,", 0) != 0) kept += line + '\n';
  return kept;
}

}  // namespace

TEST(Cli, ExactShuffleTest) {
  const auto r = run({"shuffle-test", "--fixture", "veg6", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "6/20 = 0.3")) << r.out;
  EXPECT_TRUE(contains(r.out, "Vegetarian minus Omnivore"));
  EXPECT_TRUE(contains(r.out, "baseline hypothesis"));
}

TEST(Cli, ManifestComesFirst) {
  const auto r = run({"bootstrap", "--fixture", "veg9", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("key,value\nmanifest.subcommand,bootstrap\n", 0), 0u) << r.out;
  EXPECT_TRUE(contains(r.out, "manifest.seed,0 (default)"));
  EXPECT_TRUE(contains(r.out, "manifest.replicates,1000"));
  EXPECT_TRUE(contains(r.out, "manifest.input,fixture:veg9 fnv1a64:"));
  EXPECT_TRUE(contains(r.out, "bin_center,count"));
}

TEST(Cli, RerunsAreByteIdentical) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"shuffle-test", "--fixture", "veg6", "--n", "5000", "--seed", "17"},
           {"bootstrap", "--fixture", "skewed9", "--tail", "50", "--bounds", "0,100"},
           {"montecarlo", "--n", "2000", "--seed", "3"},
           {"poll", "--k", "100", "--mode", "without"},
       }) {
    const auto a = run(args);
    const auto b = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, ThreadCountDoesNotChangeResults) {
  const auto serial = run({"bootstrap", "--fixture", "veg9", "--n", "20000", "--threads", "1"});
  const auto parallel = run({"bootstrap", "--fixture", "veg9", "--n", "20000", "--threads", "8"});
  ASSERT_EQ(serial.code, 0);
  EXPECT_EQ(without_flags(serial.out), without_flags(parallel.out));
}

TEST(Cli, SeedFromEnvironment) {
  tentative::cli::Environment env;
  env.resample_seed = "17";
  const auto from_env = run({"shuffle-test", "--fixture", "veg6"}, env);
  const auto from_flag = run({"shuffle-test", "--fixture", "veg6", "--seed", "17"});
  ASSERT_EQ(from_env.code, 0);
  EXPECT_TRUE(contains(from_env.out, "17 (RESAMPLE_SEED)"));
  EXPECT_TRUE(contains(from_flag.out, "17 (flag)"));
  EXPECT_EQ(without_flags(from_env.out).substr(without_flags(from_env.out).find("replicates")),
            without_flags(from_flag.out).substr(without_flags(from_flag.out).find("replicates")));

  // an explicit flag wins over the environment
  const auto both = run({"shuffle-test", "--fixture", "veg6", "--seed", "3"}, env);
  EXPECT_TRUE(contains(both.out, "3 (flag)"));

  env.resample_seed = "abc";
  EXPECT_EQ(run({"shuffle-test", "--fixture", "veg6"}, env).code, 2);
}

TEST(Cli, HistogramToFile) {
  const auto path = (std::filesystem::temp_directory_path() / "tentative_hist.csv").string();
  std::filesystem::remove(path);
  const auto r = run({"bootstrap", "--fixture", "veg9", "--out", path, "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "bin_center,count");
  EXPECT_FALSE(contains(r.out, "bin_center,count"));
}

TEST(Cli, CsvInput) {
  const auto path = (std::filesystem::temp_directory_path() / "tentative_cli_in.csv").string();
  std::ofstream(path) << "score,diet\n74,V\n65,V\n69,O\n37,O\n57,V\n26,O\n";
  const auto r = run({"shuffle-test", "--csv", path, "--value-col", "score", "--group-col", "diet", "--exact"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(contains(r.out, "6/20 = 0.3"));
  EXPECT_TRUE(contains(r.out, "tentative_cli_in.csv"));
}

TEST(Cli, OtherCommands) {
  const auto clip = run({"clip", "--ci", "49,72", "--query", "gt 50"});
  ASSERT_EQ(clip.code, 0) << clip.err;
  EXPECT_TRUE(contains(clip.out, "96.3"));

  const auto bayes = run({"bayes", "--hypothesis", "guess:3/4:1/50", "--hypothesis", "telepathy:0.25:1", "--worlds"});
  ASSERT_EQ(bayes.code, 0) << bayes.err;
  EXPECT_TRUE(contains(bayes.out, "50/53"));
  EXPECT_TRUE(contains(bayes.out, "total worlds: 200"));

  const auto mc = run({"montecarlo", "--trials", "8", "--k", "4"});
  ASSERT_EQ(mc.code, 0) << mc.err;
  EXPECT_TRUE(contains(mc.out, "35/128"));

  const auto fx = run({"fixtures", "--name", "veg9", "--format", "csv"});
  ASSERT_EQ(fx.code, 0) << fx.err;
  EXPECT_TRUE(contains(fx.out, "93"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bootstrap", "--nope"}).code, 2);
  EXPECT_EQ(run({"bootstrap", "--fixture", "veg9", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"bootstrap", "--fixture", "nope"}).code, 1);
  EXPECT_EQ(run({"bootstrap", "--csv", "/nonexistent.csv", "--value-col", "x"}).code, 1);
  EXPECT_EQ(run({"clip", "--ci", "5,1"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}
