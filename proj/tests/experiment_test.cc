#include "riesz/experiment.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "riesz/spec_file.h"

namespace riesz {
namespace {

struct Case {
  const char* command;
  const char* action;
  const char* spec;
  int exit_code;
};

// One spec per action.
const Case kCases[] = {
    {"subeq", "member", "n = 3\nkind = minmax\np = 2\ndiag = 1, 1, -0.5\n", 0},
    {"subeq", "riesz", "n = 4\nkind = pconvex\np = 2.5\n", 0},
    {"subeq", "dual", "n = 3\nkind = minmax\np = 3\ndiag = -1, -1, 0.5\n", 0},
    {"subeq", "expand", "n = 5\nkind = orphant\ndelta = 1.5\n", 0},
    {"subeq", "member", "n = 3\nkind = garding:det_real\nbranch = 2\ndiag = -1, 1, 2\n", 0},
    {"garding", "eig", "kind = garding:det_real\nn = 3\nmatrix = 2, 1, 0; 1, 2, 0; 0, 0, 1\n", 0},
    {"garding", "branch", "kind = garding:sigma\nk = 2\nn = 4\nbranch = 1\ndiag = 1, 2, 3, 4\n", -1},
    {"garding", "certify", "kind = garding:det_complex\nn = 4\ntrials = 50\n", 0},
    {"garding", "certify", "kind = garding:corrupted\nn = 3\ntrials = 50\n", 2},
    {"garding", "sigma", "kind = garding:det_real\nn = 4\nsigma_k = 2\ndiag = 1, 2, 3, 4\n", -1},
    {"grass", "invariant", "family = kahler\nn = 6\ncostheta = 0.5\ncount = 5\n", 0},
    {"grass", "transitivity", "family = complex\nn = 4\nbudget = 200\n", 0},
    {"flow", "density", "n = 4\ncatalog = log_z1\np = 2\nns = 1000\nnb = 1000\n", 0},
    {"flow", "tangent",
     "n = 3\ncatalog = kernel_plus_quadratic\np = 3\ncandidate_catalog = kernel\n"
     "ns = 2000\nnb = 2000\ntol = 1e-3\n",
     0},
    {"flow", "convex", "n = 3\ncatalog = abs_x1\nns = 500\nnb = 500\n", 0},
    {"flow", "restrict",
     "n = 4\ncatalog = log_z1\np = 2\nplane = 1, 3\nns = 1000\nnb = 1000\n", 0},
    {"sphere", "phi", "n = 3\ng = x1\np = 3\n", -1},
    {"sphere", "fdcheck", "n = 4\ng = x1^2 - x2^2\np = 4\n", 0},
    {"sphere", "member", "n = 3\nkind = minmax\np = 3\ng = -1\n", 0},
    {"sphere", "complex", "n = 4\ng = 0\ntheta = 1\n", -1},
    {"sphere", "quaternion", "n = 8\ng = -1\n", -1},
};

RunReport RunCase(const Case& c, std::uint64_t seed = 11) {
  return Run(ParseConfig(c.command, c.action, c.spec, seed));
}

TEST(Experiment, EveryActionRuns) {
  for (const Case& c : kCases) {
    const RunReport r = RunCase(c);
    EXPECT_NE(r.exit_code, kExitConfig)
        << c.command << " " << c.action << ": " << r.error;
    if (c.exit_code >= 0) {
      EXPECT_EQ(r.exit_code, c.exit_code) << c.command << " " << c.action;
    }
    EXPECT_EQ(r.config["command"], c.command);
    EXPECT_EQ(r.config["seed"], 11);
  }
}

TEST(Experiment, ReportsAreByteIdentical) {
  for (const Case& c : kCases) {
    const RunReport a = RunCase(c), b = RunCase(c);
    EXPECT_EQ(SerializeJson(a), SerializeJson(b)) << c.command << " " << c.action;
    ASSERT_EQ(a.table.has_value(), b.table.has_value());
    if (a.table) EXPECT_EQ(SerializeCsv(*a.table), SerializeCsv(*b.table));
  }
}

TEST(Experiment, SeedChangesSampledOutput) {
  const Case& c = kCases[10];  // grass invariant samples planes
  EXPECT_NE(SerializeJson(RunCase(c, 1)), SerializeJson(RunCase(c, 2)));
}

TEST(Experiment, DensityTable) {
  const RunReport r = RunCase(kCases[12]);
  ASSERT_TRUE(r.table.has_value());
  EXPECT_EQ(r.table->header,
            (std::vector<std::string>{"i", "j", "r", "s", "sup_r", "sup_s", "quotient"}));
  EXPECT_EQ(r.table->rows.size(), 55u);
  const std::string csv = SerializeCsv(*r.table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "i,j,r,s,sup_r,sup_s,quotient");
}

TEST(Experiment, EmitsNamedFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "riesz_experiment_test";
  std::filesystem::create_directories(dir);
  ExperimentConfig cfg = ParseConfig("flow", "density", kCases[12].spec, 5);
  cfg.out_dir = dir.string();
  const RunReport r = riesz::Run(cfg);
  const std::vector<std::string> paths = EmitTables(r, cfg);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(std::filesystem::path(paths[0]).filename(), "flow-density-5.json");
  EXPECT_EQ(std::filesystem::path(paths[1]).filename(), "flow-density-5.csv");
  std::ifstream in(paths[0]);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), SerializeJson(r));
  const auto parsed = nlohmann::json::parse(buf.str());
  EXPECT_EQ(parsed["version"]["riesz"], kVersion);
  std::filesystem::remove_all(dir);
}

TEST(Config, SeedSources) {
  EXPECT_THROW(ParseConfig("subeq", "riesz", "kind = orphant\nn = 3\n", std::nullopt),
               ConfigError);
  EXPECT_EQ(ParseConfig("subeq", "riesz", "seed = 4\nkind = orphant\nn = 3\n",
                        std::nullopt).seed, 4u);
  EXPECT_EQ(ParseConfig("subeq", "riesz", "seed = 4\nkind = orphant\nn = 3\n", 4).seed,
            4u);
  EXPECT_THROW(ParseConfig("subeq", "riesz", "seed = 4\nkind = orphant\nn = 3\n", 5),
               ConfigError);
}

TEST(Config, SpecTextErrors) {
  EXPECT_THROW(ParseSpecText("n = 3\nN = 4\n"), ConfigError);
  EXPECT_THROW(ParseSpecText("n 3\n"), ConfigError);
  const auto m = ParseSpecText("# comment\n  Family = MinMax  # trailing\n\n");
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.begin()->first, "family");
}

TEST(Config, BadInputGivesExitOne) {
  const Case bad[] = {
      {"subeq", "riesz", "n = 3\nkind = minmax\np = 2\nbogus = 1\n", 1},
      {"subeq", "riesz", "n = 3\nkind = nope\n", 1},
      {"subeq", "member", "n = 3\nkind = orphant\ndiag = 1, 2\n", 1},
      {"subeq", "member", "n = 2\nkind = orphant\nmatrix = 1, 2; 0, 1\n", 1},
      {"garding", "certify", "kind = garding:det_real\nn = 3\ntrials = 0\n", 1},
      {"grass", "transitivity", "family = complex\nn = 3\n", 1},
      {"flow", "density", "n = 3\ncatalog = kernel\np = 3\nradii = 1, 2\n", 1},
      {"flow", "density", "n = 3\nfield = x1 +\np = 1\n", 1},
      {"flow", "density", "n = 3\nfield = x1\ncatalog = kernel\np = 1\n", 1},
      {"flow", "restrict", "n = 4\ncatalog = log_z1\np = 2\nplane = 1, 9\n", 1},
      {"sphere", "fdcheck", "n = 3\ng = x1\np = 3\nh = 1\n", 1},
  };
  for (const Case& c : bad) {
    const RunReport r = RunCase(c);
    EXPECT_EQ(r.exit_code, kExitConfig) << c.spec;
    EXPECT_FALSE(r.error.empty()) << c.spec;
  }
}

TEST(Experiment, GardingBranchSubequation) {
  const RunReport r = RunCase(kCases[4]);
  EXPECT_TRUE(r.results["member"].get<bool>());
  EXPECT_NEAR(r.results["margin"].get<double>(), 1.0, 1e-9);
}

TEST(Config, FlagsOverrideAndEcho) {
  const ExperimentConfig cfg =
      ParseConfig("grass", "transitivity", "family = lagrangian\nn = 4\nbudget = 50\n", 3,
                  std::nullopt, 400);
  const RunReport r = riesz::Run(cfg);
  EXPECT_EQ(r.config["budget"], 400);
}

TEST(Experiment, CheckFailuresGiveExitTwo) {
  // A non-subharmonic field breaks the monotonicity of the quotients.
  const RunReport r = RunCase(
      {"flow", "density", "n = 3\nfield = -(r - 0.5)^2\np = 1\nradii = dyadic:0:6\n"
                          "ns = 1000\nnb = 1000\n", 2});
  EXPECT_EQ(r.exit_code, kExitCheckFailed);
  const RunReport f = RunCase({"sphere", "fdcheck", "n = 3\ng = x1\np = 3\ntol = 1e-30\n", 2});
  EXPECT_EQ(f.exit_code, kExitCheckFailed);
}

}  // namespace
}  // namespace riesz
