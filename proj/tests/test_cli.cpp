#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "ven/experiment.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path kFig2 = fs::path(VEN_FIXTURE_DIR) / "fig2.json";

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ven_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args, const std::string& env = "") {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = env + " '" + std::string(VEN_PLAN_BIN) + "' " + args + " >'" +
                            out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  std::string fig2() const { return "'" + kFig2.string() + "'"; }

  fs::path dir_;
};

TEST_F(CliTest, ValidateFig2) {
  const CliRun r = run("validate " + fig2());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("ok: 5 junctions, 6 arcs, 3 routes"), std::string::npos);
}

TEST_F(CliTest, ValidateCorruptedFileNamesTheViolation) {
  std::string text = slurp(kFig2);
  text.replace(text.find("\"arcs\": [3, 4]"), 14, "\"arcs\": [4, 3]");
  const CliRun r = run("validate '" + write("bad.json", text).string() + "'");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("route 2"), std::string::npos) << r.err;
}

TEST_F(CliTest, ValidateEmptyFileIsASyntaxError) {
  const CliRun r = run("validate '" + write("empty.json", "").string() + "'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 1"), std::string::npos);
}

TEST_F(CliTest, MissingFileAndBadFlags) {
  EXPECT_EQ(run("validate '" + (dir_ / "missing.json").string() + "'").code, 5);
  EXPECT_EQ(run("solve " + fig2() + " --objective fastest").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("--version").code, 0);
}

TEST_F(CliTest, EnumerateListsThreePaths) {
  const CliRun r = run("enumerate " + fig2());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("pair 1 -> 4: 3 paths"), std::string::npos) << r.out;
}

TEST_F(CliTest, SolveWritesPlanWithProvenance) {
  const fs::path plan = dir_ / "plan.json";
  const CliRun r = run("solve " + fig2() + " --output '" + plan.string() + "'");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("total transferred 7.2072 kWh"), std::string::npos) << r.out;
  const std::string text = slurp(plan);
  EXPECT_NE(text.find(ven::scenario_hash(ven::load_scenario(kFig2))), std::string::npos);
  EXPECT_NE(text.find("\"version\": \"" + std::string(ven::kToolVersion) + "\""),
            std::string::npos);
}

TEST_F(CliTest, SolveMinLoss) {
  const CliRun zero = run("solve " + fig2() + " --objective min-loss --delivery-floor 0");
  EXPECT_EQ(zero.code, 0);
  EXPECT_NE(zero.out.find("optimal, 3 paths, transferred 0 kWh, loss 0 kWh"), std::string::npos)
      << zero.out;
  const CliRun over = run("solve " + fig2() + " --objective min-loss --delivery-floor 8");
  EXPECT_EQ(over.code, 0);
  EXPECT_NE(over.out.find("infeasible"), std::string::npos) << over.out;
}

TEST_F(CliTest, SweepCsvMatchesLibrary) {
  const fs::path csv = dir_ / "sweep.csv";
  const CliRun r = run("sweep " + fig2() + " --parameter T --values 0.5,1,3,5 --output '" +
                    csv.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(csv, std::ios::binary);
  const ven::SweepResult back = ven::read_sweep_csv(in);

  const ven::ScenarioPlanner planner(ven::load_scenario(kFig2));
  const ven::SweepResult direct =
      ven::run_sweep(planner, {ven::SweepParameter::Window, {0.5, 1, 3, 5}}, {},
                     planner.scenario().params, planner.scenario().penetration);
  ASSERT_EQ(back.rows.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(back.rows[i].transferred, direct.rows[i].transferred);
    EXPECT_EQ(back.rows[i].loss, direct.rows[i].loss);
  }
  EXPECT_EQ(back.rows[0].transferred, 0.0);
}

TEST_F(CliTest, SweepRejectsUnorderedValues) {
  EXPECT_EQ(run("sweep " + fig2() + " --parameter z --values 0.9,0.5").code, 3);
}

TEST_F(CliTest, GenerateUsesSeedFromEnvironment) {
  const CliRun a = run("generate --junctions 30 --arcs 80 --routes 40", "EVNET_SEED=9");
  const CliRun b = run("generate --junctions 30 --arcs 80 --routes 40 --seed 9");
  const CliRun c = run("generate --junctions 30 --arcs 80 --routes 40");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  EXPECT_NE(a.out.find("\"seed\": 9"), std::string::npos);
  EXPECT_EQ(run("generate", "EVNET_SEED=nope").code, 1);
  EXPECT_EQ(run("generate --junctions 30 --arcs 5").code, 3);
}

}  // namespace
