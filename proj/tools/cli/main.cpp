#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "saext/errors.hpp"

using namespace saext::cli;

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalues of 1D Schroedinger operators with general self-adjoint boundary conditions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<long long> seed;
  std::optional<double> mu;
  std::optional<int> levels;

  const char* names[][2] = {
      {"solve", "FEM eigenvalues (spectrum.csv, eigenfunction_<k>.csv)"},
      {"oracle", "zeros of the spectral determinant (roots.csv, scan.csv)"},
      {"convergence", "Dirichlet ground-state H1 convergence sweep (convergence.csv)"},
      {"stability", "eigenvalue sensitivity under perturbations of U (stability.csv)"},
      {"condition", "conditioning of the boundary matrix (condition.csv)"},
  };
  for (const auto& n : names) {
    CLI::App* sub = app.add_subcommand(n[0], n[1]);
    sub->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "seed for random boundary conditions")->check(CLI::NonNegativeNumber);
    sub->add_option("--mu", mu, "mass factor in H = -mu d^2/dx^2 + V")->check(CLI::PositiveNumber);
    sub->add_option("--levels", levels, "number of eigenvalues to report")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  JobConfig config;
  try {
    config = load_config(config_path);
  } catch (const saext::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const saext::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  if (seed) config.seed = static_cast<std::uint64_t>(*seed);
  if (mu) config.mu = *mu;
  if (levels) config.levels = *levels;

  RunContext ctx;
  ctx.out_dir = out_dir;
  ctx.threads = worker_count();
  ctx.log = &std::cout;
  return run_command(app.get_subcommands().front()->get_name(), config, ctx, std::cerr);
}
