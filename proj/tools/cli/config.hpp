#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "saext/boundary.hpp"
#include "saext/experiments.hpp"
#include "saext/geometry.hpp"
#include "saext/potential.hpp"

namespace saext::cli {

inline constexpr const char* kSchema = "saext-config/1";

/// 1e-5, 2e-5, ..., 1e-3.
std::vector<double> default_epsilons();

/// A fully resolved job description. Every field has an explicit default so
/// that the echo written next to the outputs is complete.
struct JobConfig {
  std::vector<Interval> intervals{{0.0, 6.283185307179586}};

  /// dirichlet | neumann | periodic | quasi_periodic | matrix | random
  std::string boundary = "dirichlet";
  double theta = 0.0;
  CMatrix matrix;
  Ordering ordering = Ordering::Endpoint;

  /// zero | constant | sampled | polynomial
  std::string potential = "zero";
  /// constant: one value per interval; polynomial: c0 + c1 x + c2 x^2 + ...
  std::vector<double> potential_values;
  std::vector<std::vector<double>> potential_samples;

  int resolution = 250;
  double mu = 1.0;
  int levels = 10;
  int quadrature_order = 3;
  double kappa_max = kDefaultKappaMax;
  int max_retries = kDefaultMaxRetries;
  bool write_eigenfunctions = false;
  bool eigenfunction_midpoints = false;

  /// Oracle window; when empty the lowest `levels` roots are searched.
  std::vector<double> oracle_range;
  double oracle_density = 2000.0;
  bool oracle_scan = false;

  std::vector<int> resolutions{50, 100, 200, 400, 800};

  std::vector<double> epsilons = default_epsilons();
  std::vector<int> tracked_levels{1, 3, 5, 7};
  /// linear | geodesic
  std::string stability_mode = "linear";
  /// index | nearest
  std::string level_matching = "index";

  std::uint64_t seed = 0;
};

/// Parses the configuration text. Throws ValidationError on a missing or
/// wrong schema tag, unknown keys, malformed values or inconsistent fields.
JobConfig parse_config(const std::string& text);
/// Reads and parses a file; unreadable files raise IoError.
JobConfig load_config(const std::filesystem::path& path);

/// The resolved configuration in the same format; parse_config(echo(c)) == c.
std::string echo_config(const JobConfig& config);

/// Reals may be written as numbers or as multiples of pi: "pi", "2pi",
/// "0.5pi", "pi/3", "-2pi/3".
double parse_real(const std::string& text);
/// "re,im" or a plain real.
Complex parse_complex(const std::string& text);

IntervalSet make_geometry(const JobConfig& config);
BoundaryCondition make_boundary(const JobConfig& config);
Potential make_potential(const JobConfig& config);
StabilityOptions make_stability_options(const JobConfig& config, int threads);

}  // namespace saext::cli
