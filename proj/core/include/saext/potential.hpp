#pragma once

#include <functional>
#include <string>
#include <vector>

#include "saext/geometry.hpp"

namespace saext {

/// A real, bounded potential on M, given per interval.
class Potential {
 public:
  enum class Kind { Zero, ConstantPerInterval, Sampled, Callable };

  /// Host-supplied potential: fn(alpha, x) for x in interval alpha.
  using Function = std::function<double(int alpha, double x)>;

  static Potential zero();
  static Potential constant(std::vector<double> per_interval);
  /// samples[alpha] are values on a uniform grid spanning [a_alpha, b_alpha]
  /// (first and last sample sit on the endpoints); linear in between.
  static Potential sampled(std::vector<std::vector<double>> samples);
  static Potential callable(Function fn, std::string label = "callable");

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }

  double operator()(const IntervalSet& geometry, int alpha, double x) const;

  /// True for Zero and ConstantPerInterval.
  bool is_piecewise_constant() const { return kind_ == Kind::Zero || kind_ == Kind::ConstantPerInterval; }
  double constant_value(int alpha) const;

  /// Infimum of the potential over M. Exact for all kinds except Callable,
  /// where it is the minimum over a dense sample.
  double minimum(const IntervalSet& geometry) const;

  /// Throws ValidationError if the descriptor does not fit the geometry.
  void check_compatible(const IntervalSet& geometry) const;

 private:
  Kind kind_ = Kind::Zero;
  std::string label_ = "zero";
  std::vector<double> constants_;
  std::vector<std::vector<double>> samples_;
  Function fn_;
};

}  // namespace saext
