#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FSI_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fsi_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path f = dir / "case.ini";
  std::ofstream(f) << text;
  return f;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("convergence --axis h --levels 2"), 2);
  EXPECT_EQ(run_cli("convergence --axis x"), 2);
  EXPECT_EQ(run_cli("run --config /nonexistent.ini"), 2);
  EXPECT_EQ(run_cli("--help"), 0);
}

TEST(Cli, NonPositiveStepIsConfigError) {
  const fs::path dir = scratch("tau");
  const fs::path cfg = write_config(dir, "[time]\ntau = 0\n");
  EXPECT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir / "out").string()), 2);
}

TEST(Cli, UnforcedRunWritesZeroOutputs) {
  const fs::path dir = scratch("zero");
  const fs::path cfg = write_config(dir,
                                    "[mesh]\nnx = 6\nny = 3\n[time]\ntau = 0.01\nfinal_time = 0.05\n"
                                    "[output]\nevery = 1\n");
  const fs::path out = dir / "out";
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --out " + out.string()), 0);
  for (const char* f : {"energy.csv", "gcl.csv", "manifest.json", "state_00000.vtk", "state_00005.vtk"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  std::ifstream in(out / "energy.csv");
  std::string line;
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::istringstream row(line);
    std::string cell;
    for (int c = 0; std::getline(row, cell, ','); ++c)
      if (c >= 2 && c <= 13) EXPECT_EQ(std::stod(cell), c == 13 ? 1.0 : 0.0) << line;
  }
  EXPECT_EQ(rows, 5);
  // a second run into the same directory needs --overwrite
  EXPECT_EQ(run_cli("run --config " + cfg.string() + " --out " + out.string()), 2);
  EXPECT_EQ(run_cli("run --overwrite --config " + cfg.string() + " --out " + out.string()), 0);
}

TEST(Cli, ContactIsNumericalFailure) {
  const fs::path dir = scratch("contact");
  const fs::path cfg = write_config(dir,
                                    "[forcing]\namplitude = 200\n[time]\nfinal_time = 0.2\n"
                                    "[scheme]\neta_floor = 0.95\n");
  EXPECT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir / "out").string()), 3);
}

TEST(Cli, EnergyCheckPasses) {
  const fs::path dir = scratch("energy");
  const fs::path cfg = write_config(dir,
                                    "[forcing]\namplitude = 200\n[mesh]\nnx = 8\nny = 4\n"
                                    "[time]\ntau = 5e-3\nfinal_time = 0.3\n");
  EXPECT_EQ(run_cli("energy-check --config " + cfg.string() + " --out " + (dir / "out").string()), 0);
}
