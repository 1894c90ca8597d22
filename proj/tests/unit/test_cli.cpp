#if SAEXT_HAVE_CLI

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "saext/errors.hpp"

using namespace saext;
using namespace saext::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("saext_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

int run(const std::string& cmd, const std::string& yaml, const fs::path& dir, std::string* err_text = nullptr) {
  std::ostringstream err, log;
  const JobConfig c = parse_config(yaml);
  const int code = run_command(cmd, c, {dir, 1, &log}, err);
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST(Config, ParsesValuesAndDefaults) {
  const JobConfig c = parse_config(
      "schema: saext-config/1\n"
      "intervals: [[0, 2pi], [-1, pi/2]]\n"
      "boundary: matrix\n"
      "matrix: [\"1,0\", \"0,0\", \"0,0\", \"0,0\", \"0,0\", \"0,1\", \"0,0\", \"0,0\",\n"
      "         \"0,0\", \"0,0\", \"-1,0\", \"0,0\", \"0,0\", \"0,0\", \"0,0\", \"1,0\"]\n"
      "N: 64\n"
      "mu: 0.5\n");
  ASSERT_EQ(c.intervals.size(), 2u);
  EXPECT_DOUBLE_EQ(c.intervals[0].b, 2.0 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(c.intervals[1].b, std::numbers::pi / 2.0);
  EXPECT_EQ(c.resolution, 64);
  EXPECT_EQ(c.mu, 0.5);
  EXPECT_EQ(c.levels, 10);
  EXPECT_EQ(c.matrix(1, 1), Complex(0.0, 1.0));
  EXPECT_NO_THROW(make_boundary(c));
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("schema: other/2\n"), ValidationError);
  EXPECT_THROW(parse_config("schema: saext-config/1\nbogus_key: 3\n"), ValidationError);
  EXPECT_THROW(parse_config("schema: saext-config/1\nN: 1\n"), ValidationError);
  EXPECT_THROW(parse_config("schema: saext-config/1\nboundary: matrix\n"), ValidationError);
  EXPECT_THROW(parse_config("schema: saext-config/1\nboundary: sideways\n"), ValidationError);
  EXPECT_THROW(load_config("/nonexistent/saext.yaml"), IoError);
}

TEST(Config, ScalarParsers) {
  EXPECT_DOUBLE_EQ(parse_real("2pi"), 2.0 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(parse_real("pi/3"), std::numbers::pi / 3.0);
  EXPECT_DOUBLE_EQ(parse_real("-1.5e2"), -150.0);
  EXPECT_THROW(parse_real("two"), ValidationError);
  EXPECT_EQ(parse_complex("1.5,-2"), Complex(1.5, -2.0));
  EXPECT_EQ(parse_complex("3"), Complex(3.0, 0.0));
}

TEST(Config, EchoRoundTrips) {
  JobConfig c = parse_config(
      "schema: saext-config/1\nintervals: [[0, 1], [0, 3]]\nboundary: random\nseed: 42\n"
      "potential: constant\npotential_values: [0, 2]\nN: 80\nepsilon_range: [1e-4, 1e-3, 3e-4]\n");
  const std::string once = echo_config(c);
  const std::string twice = echo_config(parse_config(once));
  EXPECT_EQ(once, twice);
  EXPECT_EQ(parse_config(once).epsilons, c.epsilons);
}

TEST(Commands, SolveWritesSpectrumAndEigenfunctions) {
  const fs::path dir = fresh_dir("solve");
  ASSERT_EQ(run("solve",
                "schema: saext-config/1\nboundary: dirichlet\nN: 100\nlevels: 3\nmu: 0.5\n"
                "write_eigenfunctions: true\n",
                dir),
            kExitOk);
  const auto spec = lines(dir / "spectrum.csv");
  ASSERT_EQ(spec.size(), 4u);
  EXPECT_EQ(spec[0], "index,lambda,residual");
  EXPECT_NEAR(std::stod(spec[1].substr(spec[1].find(',') + 1)), 0.125, 1e-4);
  EXPECT_TRUE(fs::exists(dir / "eigenfunction_1.csv"));
  EXPECT_TRUE(fs::exists(dir / "config.resolved.yaml"));
  EXPECT_EQ(lines(dir / "eigenfunction_3.csv").front(), "interval,x,re,im");
}

TEST(Commands, OracleRootsAndEmptyRange) {
  const fs::path dir = fresh_dir("oracle");
  ASSERT_EQ(run("oracle", "schema: saext-config/1\nmu: 0.5\noracle_range: [0.01, 1.9]\n", dir), kExitOk);
  const auto roots = lines(dir / "roots.csv");
  ASSERT_EQ(roots.size(), 4u);
  const double expected[] = {0.125, 0.5, 1.125};
  for (int i = 0; i < 3; ++i) {
    std::stringstream row(roots[static_cast<std::size_t>(i + 1)]);
    std::string index, lambda, mult;
    std::getline(row, index, ',');
    std::getline(row, lambda, ',');
    std::getline(row, mult, ',');
    EXPECT_NEAR(std::stod(lambda), expected[i], 1e-9);
    EXPECT_EQ(mult, "1");
  }
  const fs::path empty = fresh_dir("oracle_empty");
  ASSERT_EQ(run("oracle", "schema: saext-config/1\noracle_range: [0.01, 0.2]\n", empty), kExitOk);
  EXPECT_EQ(lines(empty / "roots.csv").size(), 1u);
}

TEST(Commands, ExitCodes) {
  std::string err;
  const fs::path dir = fresh_dir("codes");
  EXPECT_EQ(run("solve", "schema: saext-config/1\nboundary: matrix\nmatrix: [\"1,0\", \"0,0\", \"0,0\", \"2,0\"]\n", dir,
                &err),
            kExitValidation);
  EXPECT_NE(err.find("unitar"), std::string::npos) << err;

  // No resolution can meet a condition threshold this close to 1.
  EXPECT_EQ(run("solve", "schema: saext-config/1\nboundary: periodic\nN: 20\nkappa_max: 1.0001\nmax_retries: 2\n",
                dir),
            kExitConditioning);

  const fs::path blocked = fresh_dir("blocked");
  std::ofstream(blocked.string()) << "file in the way";
  EXPECT_EQ(run("solve", "schema: saext-config/1\nN: 20\n", blocked / "sub"), kExitIo);
  fs::remove(blocked);
}

TEST(Commands, ReproducibleOutput) {
  const std::string yaml =
      "schema: saext-config/1\nintervals: [[0, 1], [0, 3]]\nboundary: random\nseed: 42\nN: 60\nlevels: 4\n";
  const fs::path a = fresh_dir("repro_a"), b = fresh_dir("repro_b");
  ASSERT_EQ(run("solve", yaml, a), kExitOk);
  ASSERT_EQ(run("solve", yaml, b), kExitOk);
  EXPECT_EQ(slurp(a / "spectrum.csv"), slurp(b / "spectrum.csv"));
}

TEST(Commands, ConvergenceWithOneResolution) {
  const fs::path dir = fresh_dir("conv");
  ASSERT_EQ(run("convergence", "schema: saext-config/1\nN_list: [40]\n", dir), kExitOk);
  const auto rows = lines(dir / "convergence.csv");
  EXPECT_EQ(rows.back(), "insufficient-data,,,");
}

TEST(Commands, StabilityMarksZeroEpsilon) {
  const fs::path dir = fresh_dir("stab");
  ASSERT_EQ(run("stability",
                "schema: saext-config/1\nboundary: periodic\nN: 60\nepsilon_range: [0, 2e-3, 1e-3]\n"
                "tracked_levels: [1]\n",
                dir),
            kExitOk);
  const std::string text = slurp(dir / "stability.csv");
  EXPECT_NE(text.find("undefined epsilon"), std::string::npos);
  EXPECT_NE(text.find("insufficient-data"), std::string::npos);
}

#endif
