#include "cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "saext/errors.hpp"

namespace saext::cli {

std::vector<double> default_epsilons() {
  std::vector<double> eps;
  for (int i = 1; i <= 100; ++i) eps.push_back(1e-5 * i);
  return eps;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last) throw ValidationError("not a real number: '" + text + "'");
  return v;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ValidationError("config key '" + key + "': " + why);
}

double real_of(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) bad(key, "expected a real");
  try {
    return parse_real(n.Scalar());
  } catch (const ValidationError& e) {
    bad(key, e.what());
  }
}

long long int_of(const YAML::Node& n, const std::string& key) {
  const double v = real_of(n, key);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) bad(key, "expected an integer");
  return static_cast<long long>(v);
}

bool bool_of(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) bad(key, "expected true or false");
  const std::string s = n.Scalar();
  if (s == "true") return true;
  if (s == "false") return false;
  bad(key, "expected true or false, got '" + s + "'");
}

std::string string_of(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) bad(key, "expected a string");
  return n.Scalar();
}

std::vector<double> reals_of(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) bad(key, "expected a list of reals");
  std::vector<double> out;
  for (const auto& item : n) out.push_back(real_of(item, key));
  return out;
}

std::vector<int> ints_of(const YAML::Node& n, const std::string& key) {
  if (!n.IsSequence()) bad(key, "expected a list of integers");
  std::vector<int> out;
  for (const auto& item : n) out.push_back(static_cast<int>(int_of(item, key)));
  return out;
}

std::string join_reals(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_real(v[i]);
  return s + "]";
}

std::string join_ints(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

void validate(const JobConfig& c) {
  if (c.intervals.empty()) bad("intervals", "at least one interval is required");
  const std::set<std::string> boundaries{"dirichlet", "neumann", "periodic", "quasi_periodic", "matrix", "random"};
  if (!boundaries.count(c.boundary)) bad("boundary", "unknown kind '" + c.boundary + "'");
  const std::set<std::string> potentials{"zero", "constant", "sampled", "polynomial"};
  if (!potentials.count(c.potential)) bad("potential", "unknown kind '" + c.potential + "'");
  if (c.resolution < 2) bad("N", "must be at least 2");
  if (!(c.mu > 0.0) || !std::isfinite(c.mu)) bad("mu", "must be positive");
  if (c.levels < 1) bad("levels", "must be positive");
  if (c.quadrature_order < 1 || c.quadrature_order > 20) bad("quadrature_order", "must be in 1..20");
  if (!(c.kappa_max > 1.0)) bad("kappa_max", "must exceed 1");
  if (c.max_retries < 0) bad("max_retries", "must be non-negative");
  if (!c.oracle_range.empty() && (c.oracle_range.size() != 2 || !(c.oracle_range[0] < c.oracle_range[1])))
    bad("oracle_range", "expected [min, max] with min < max");
  if (!(c.oracle_density > 0.0)) bad("oracle_density", "must be positive");
  if (c.resolutions.empty()) bad("N_list", "must not be empty");
  for (int n : c.resolutions)
    if (n < 2) bad("N_list", "entries must be at least 2");
  for (double e : c.epsilons)
    if (!(e >= 0.0) || !std::isfinite(e)) bad("epsilons", "entries must be non-negative");
  for (int l : c.tracked_levels)
    if (l < 0) bad("tracked_levels", "entries are 0-based and non-negative");
  if (c.stability_mode != "linear" && c.stability_mode != "geodesic")
    bad("stability_mode", "expected linear or geodesic");
  if (c.level_matching != "index" && c.level_matching != "nearest")
    bad("level_matching", "expected index or nearest");
  if (c.boundary == "matrix") {
    const auto dim = static_cast<Eigen::Index>(2 * c.intervals.size());
    if (c.matrix.rows() != dim || c.matrix.cols() != dim)
      bad("matrix", "expected " + std::to_string(dim * dim) + " entries for " + std::to_string(c.intervals.size()) +
                        " interval(s)");
  }
}

}  // namespace

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  const auto pos = t.find("pi");
  if (pos == std::string::npos) return parse_plain(t);
  std::string coef = trim(t.substr(0, pos));
  std::string rest = trim(t.substr(pos + 2));
  double value = std::numbers::pi;
  if (coef == "-") value = -value;
  else if (!coef.empty() && coef != "+") value *= parse_plain(coef);
  if (!rest.empty()) {
    if (rest[0] != '/') throw ValidationError("not a real number: '" + text + "'");
    const double den = parse_plain(rest.substr(1));
    if (den == 0.0) throw ValidationError("division by zero in '" + text + "'");
    value /= den;
  }
  return value;
}

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return {parse_real(text), 0.0};
  return {parse_real(text.substr(0, comma)), parse_real(text.substr(comma + 1))};
}

JobConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ValidationError(std::string("config is not well-formed: ") + e.what());
  }
  if (!root.IsMap()) throw ValidationError("config must be a mapping of keys to values");
  if (!root["schema"] || !root["schema"].IsScalar() || root["schema"].Scalar() != kSchema)
    throw ValidationError(std::string("config must start with 'schema: ") + kSchema + "'");

  JobConfig c;
  YAML::Node matrix_node;
  bool has_matrix = false;
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (key == "schema") continue;
    if (key == "intervals") {
      if (!v.IsSequence()) bad(key, "expected a list of [a, b] pairs");
      c.intervals.clear();
      for (const auto& iv : v) {
        const std::vector<double> ab = reals_of(iv, key);
        if (ab.size() != 2) bad(key, "each interval is [a, b]");
        c.intervals.push_back({ab[0], ab[1]});
      }
    } else if (key == "boundary") {
      c.boundary = string_of(v, key);
    } else if (key == "theta") {
      c.theta = real_of(v, key);
    } else if (key == "matrix") {
      matrix_node = v;
      has_matrix = true;
    } else if (key == "ordering") {
      const std::string o = string_of(v, key);
      if (o == "endpoint") c.ordering = Ordering::Endpoint;
      else if (o == "block") c.ordering = Ordering::Block;
      else bad(key, "expected endpoint or block");
    } else if (key == "potential") {
      c.potential = string_of(v, key);
    } else if (key == "potential_values") {
      c.potential_values = reals_of(v, key);
    } else if (key == "potential_samples") {
      if (!v.IsSequence()) bad(key, "expected one list of samples per interval");
      c.potential_samples.clear();
      for (const auto& row : v) c.potential_samples.push_back(reals_of(row, key));
    } else if (key == "N") {
      c.resolution = static_cast<int>(int_of(v, key));
    } else if (key == "mu") {
      c.mu = real_of(v, key);
    } else if (key == "levels") {
      c.levels = static_cast<int>(int_of(v, key));
    } else if (key == "quadrature_order") {
      c.quadrature_order = static_cast<int>(int_of(v, key));
    } else if (key == "kappa_max") {
      c.kappa_max = real_of(v, key);
    } else if (key == "max_retries") {
      c.max_retries = static_cast<int>(int_of(v, key));
    } else if (key == "write_eigenfunctions") {
      c.write_eigenfunctions = bool_of(v, key);
    } else if (key == "eigenfunction_midpoints") {
      c.eigenfunction_midpoints = bool_of(v, key);
    } else if (key == "oracle_range") {
      c.oracle_range = reals_of(v, key);
    } else if (key == "oracle_density") {
      c.oracle_density = real_of(v, key);
    } else if (key == "oracle_scan") {
      c.oracle_scan = bool_of(v, key);
    } else if (key == "N_list") {
      c.resolutions = ints_of(v, key);
    } else if (key == "epsilons") {
      c.epsilons = reals_of(v, key);
    } else if (key == "epsilon_range") {
      const std::vector<double> r = reals_of(v, key);
      if (r.size() != 3 || !(r[2] > 0.0) || r[1] < r[0]) bad(key, "expected [start, stop, step] with step > 0");
      c.epsilons.clear();
      const auto count = static_cast<long long>(std::floor((r[1] - r[0]) / r[2] * (1.0 + 1e-12))) + 1;
      for (long long i = 0; i < count; ++i) c.epsilons.push_back(r[0] + r[2] * static_cast<double>(i));
    } else if (key == "tracked_levels") {
      c.tracked_levels = ints_of(v, key);
    } else if (key == "stability_mode") {
      c.stability_mode = string_of(v, key);
    } else if (key == "level_matching") {
      c.level_matching = string_of(v, key);
    } else if (key == "seed") {
      const long long s = int_of(v, key);
      if (s < 0) bad(key, "must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    } else {
      throw ValidationError("unknown config key '" + key + "'");
    }
  }

  if (has_matrix) {
    std::vector<Complex> entries;
    auto add = [&](const YAML::Node& n) { entries.push_back(parse_complex(string_of(n, "matrix"))); };
    if (!matrix_node.IsSequence()) bad("matrix", "expected a list of \"re,im\" entries");
    for (const auto& item : matrix_node) {
      if (item.IsSequence()) {
        for (const auto& e : item) add(e);
      } else {
        add(item);
      }
    }
    const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
    if (dim * dim != static_cast<Eigen::Index>(entries.size())) bad("matrix", "entry count is not a square");
    c.matrix.resize(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index col = 0; col < dim; ++col) c.matrix(r, col) = entries[static_cast<std::size_t>(r * dim + col)];
  }
  validate(c);
  return c;
}

JobConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string echo_config(const JobConfig& c) {
  std::ostringstream out;
  out << "schema: " << kSchema << "\n";
  out << "intervals: [";
  for (std::size_t i = 0; i < c.intervals.size(); ++i)
    out << (i ? ", " : "") << "[" << format_real(c.intervals[i].a) << ", " << format_real(c.intervals[i].b) << "]";
  out << "]\n";
  out << "boundary: " << c.boundary << "\n";
  out << "theta: " << format_real(c.theta) << "\n";
  if (c.matrix.size() > 0) {
    out << "matrix: [";
    for (Eigen::Index r = 0; r < c.matrix.rows(); ++r)
      for (Eigen::Index col = 0; col < c.matrix.cols(); ++col)
        out << (r || col ? ", " : "") << "\"" << format_real(c.matrix(r, col).real()) << ","
            << format_real(c.matrix(r, col).imag()) << "\"";
    out << "]\n";
  }
  out << "ordering: " << (c.ordering == Ordering::Endpoint ? "endpoint" : "block") << "\n";
  out << "potential: " << c.potential << "\n";
  out << "potential_values: " << join_reals(c.potential_values) << "\n";
  out << "potential_samples: [";
  for (std::size_t i = 0; i < c.potential_samples.size(); ++i) out << (i ? ", " : "") << join_reals(c.potential_samples[i]);
  out << "]\n";
  out << "N: " << c.resolution << "\n";
  out << "mu: " << format_real(c.mu) << "\n";
  out << "levels: " << c.levels << "\n";
  out << "quadrature_order: " << c.quadrature_order << "\n";
  out << "kappa_max: " << format_real(c.kappa_max) << "\n";
  out << "max_retries: " << c.max_retries << "\n";
  out << "write_eigenfunctions: " << (c.write_eigenfunctions ? "true" : "false") << "\n";
  out << "eigenfunction_midpoints: " << (c.eigenfunction_midpoints ? "true" : "false") << "\n";
  out << "oracle_range: " << join_reals(c.oracle_range) << "\n";
  out << "oracle_density: " << format_real(c.oracle_density) << "\n";
  out << "oracle_scan: " << (c.oracle_scan ? "true" : "false") << "\n";
  out << "N_list: " << join_ints(c.resolutions) << "\n";
  out << "epsilons: " << join_reals(c.epsilons) << "\n";
  out << "tracked_levels: " << join_ints(c.tracked_levels) << "\n";
  out << "stability_mode: " << c.stability_mode << "\n";
  out << "level_matching: " << c.level_matching << "\n";
  out << "seed: " << c.seed << "\n";
  return out.str();
}

IntervalSet make_geometry(const JobConfig& c) { return IntervalSet(c.intervals); }

BoundaryCondition make_boundary(const JobConfig& c) {
  const int n = static_cast<int>(c.intervals.size());
  if (c.boundary == "dirichlet") return preset_dirichlet(n);
  if (c.boundary == "neumann") return preset_neumann(n);
  if (c.boundary == "periodic" || c.boundary == "quasi_periodic") {
    if (n != 1) bad("boundary", c.boundary + " needs exactly one interval");
    return preset_quasi_periodic(c.boundary == "periodic" ? 0.0 : c.theta);
  }
  if (c.boundary == "random") {
    std::mt19937_64 rng(c.seed);
    return BoundaryCondition::from_matrix(random_unitary(2 * n, rng), Ordering::Endpoint);
  }
  return BoundaryCondition::from_matrix(c.matrix, c.ordering);
}

Potential make_potential(const JobConfig& c) {
  const IntervalSet geometry = make_geometry(c);
  Potential p = Potential::zero();
  if (c.potential == "constant") {
    p = Potential::constant(c.potential_values);
  } else if (c.potential == "sampled") {
    p = Potential::sampled(c.potential_samples);
  } else if (c.potential == "polynomial") {
    if (c.potential_values.empty()) bad("potential_values", "polynomial needs at least one coefficient");
    const std::vector<double> coef = c.potential_values;
    p = Potential::callable(
        [coef](int, double x) {
          double v = 0.0;
          for (auto it = coef.rbegin(); it != coef.rend(); ++it) v = v * x + *it;
          return v;
        },
        "polynomial");
  }
  p.check_compatible(geometry);
  return p;
}

StabilityOptions make_stability_options(const JobConfig& c, int threads) {
  StabilityOptions o;
  o.resolution = c.resolution;
  o.mu = c.mu;
  o.quadrature_order = c.quadrature_order;
  o.levels = c.tracked_levels;
  o.mode = c.stability_mode == "geodesic" ? PerturbationMode::Geodesic : PerturbationMode::Linear;
  o.matching = c.level_matching == "nearest" ? LevelMatching::Nearest : LevelMatching::SortedIndex;
  o.threads = threads;
  return o;
}

}  // namespace saext::cli
