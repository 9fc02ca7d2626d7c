// Runs the installed-style `zeno` executable end to end.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "zeno_cli_integration" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Returns the exit status; stdout and stderr go to files in `dir`.
int zeno(const std::string& args, const fs::path& dir, const std::string& env = "") {
  const std::string cmd = env + " '" ZENO_CLI_PATH "' " + args + " >'" + (dir / "stdout").string() +
                          "' 2>'" + (dir / "stderr").string() + "'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliIntegration, SeededTrajectoryIsByteIdentical) {
  const fs::path dir = scratch("seeded");
  const std::string common = "trajectory --alpha 0 --seed 7 --t-end 2 --dt 0.001 --out ";
  ASSERT_EQ(zeno(common + "'" + (dir / "a.csv").string() + "'", dir), 0) << slurp(dir / "stderr");
  ASSERT_EQ(zeno(common + "'" + (dir / "b.csv").string() + "'", dir), 0);
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
  EXPECT_FALSE(slurp(dir / "a.csv").empty());

  const std::string noisy = "trajectory --lambda 1.5 --seed 11 --t-end 2 --out ";
  ASSERT_EQ(zeno(noisy + "'" + (dir / "c.csv").string() + "'", dir), 0);
  ASSERT_EQ(zeno(noisy + "'" + (dir / "d.csv").string() + "'", dir), 0);
  EXPECT_EQ(slurp(dir / "c.csv"), slurp(dir / "d.csv"));
}

TEST(CliIntegration, SidecarReproducesRun) {
  const fs::path dir = scratch("sidecar");
  ASSERT_EQ(zeno("ensemble --lambda 1.2 --n 20 --t-end 1 --seed 3 --format json --out '" +
                     (dir / "first.json").string() + "'",
                 dir),
            0)
      << slurp(dir / "stderr");
  ASSERT_TRUE(fs::exists(dir / "first.json.config.json"));
  ASSERT_EQ(zeno("--config '" + (dir / "first.json.config.json").string() + "' --out '" +
                     (dir / "second.json").string() + "'",
                 dir),
            0)
      << slurp(dir / "stderr");
  EXPECT_EQ(slurp(dir / "first.json"), slurp(dir / "second.json"));
}

TEST(CliIntegration, EveryCommandRunsWithDefaults) {
  const fs::path dir = scratch("defaults");
  for (const std::string cmd : {"portrait", "critical-points", "action", "transition-time",
                                "zeno-frequencies", "density", "trajectory", "mlp", "ensemble"}) {
    const std::string extra = cmd == "ensemble" ? " --n 16 --t-end 1" : "";
    EXPECT_EQ(zeno(cmd + extra, dir, "ZENO_OUTPUT_DIR='" + dir.string() + "'"), 0)
        << cmd << ": " << slurp(dir / "stderr");
    EXPECT_TRUE(fs::exists(dir / (cmd + ".csv"))) << cmd;
    EXPECT_TRUE(fs::exists(dir / (cmd + ".csv.config.json"))) << cmd;
  }
}

TEST(CliIntegration, TomlConfigWithFlagOverride) {
  const fs::path dir = scratch("toml");
  {
    std::ofstream cfg(dir / "run.toml");
    cfg << "command = \"critical-points\"\nlambda = 1.2\n";
  }
  ASSERT_EQ(zeno("--config '" + (dir / "run.toml").string() + "' --out -", dir), 0);
  EXPECT_NE(slurp(dir / "stdout").find("1.50755"), std::string::npos) << slurp(dir / "stdout");
  ASSERT_EQ(zeno("critical-points --config '" + (dir / "run.toml").string() +
                     "' --lambda 1.5 --out -",
                 dir),
            0);
  EXPECT_NE(slurp(dir / "stdout").find("0.89442"), std::string::npos) << slurp(dir / "stdout");
}

TEST(CliIntegration, ExitStatuses) {
  const fs::path dir = scratch("status");
  EXPECT_EQ(zeno("density --count 1 --out -", dir), 2);
  EXPECT_EQ(zeno("critical-points --lambda 0.9 --out -", dir), 3);
  EXPECT_NE(slurp(dir / "stderr").find("NoZenoRegime"), std::string::npos);
  EXPECT_EQ(zeno("--help", dir), 0);
  EXPECT_EQ(zeno("mlp --help", dir), 0);
  EXPECT_NE(slurp(dir / "stdout").find("p_x"), std::string::npos);
}

}  // namespace
