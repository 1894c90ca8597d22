#include "saext/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "saext/errors.hpp"

namespace saext {

Potential Potential::zero() { return Potential{}; }

Potential Potential::constant(std::vector<double> per_interval) {
  for (double c : per_interval) {
    if (!std::isfinite(c)) throw ValidationError("constant potential values must be finite");
  }
  Potential p;
  p.kind_ = Kind::ConstantPerInterval;
  p.label_ = "constant";
  p.constants_ = std::move(per_interval);
  return p;
}

Potential Potential::sampled(std::vector<std::vector<double>> samples) {
  for (const auto& s : samples) {
    if (s.size() < 2) throw ValidationError("sampled potential needs at least 2 samples per interval");
    for (double v : s) {
      if (!std::isfinite(v)) throw ValidationError("sampled potential values must be finite");
    }
  }
  Potential p;
  p.kind_ = Kind::Sampled;
  p.label_ = "sampled";
  p.samples_ = std::move(samples);
  return p;
}

Potential Potential::callable(Function fn, std::string label) {
  if (!fn) throw ValidationError("callable potential is empty");
  Potential p;
  p.kind_ = Kind::Callable;
  p.label_ = std::move(label);
  p.fn_ = std::move(fn);
  return p;
}

double Potential::constant_value(int alpha) const {
  if (kind_ == Kind::Zero) return 0.0;
  if (kind_ == Kind::ConstantPerInterval) return constants_.at(static_cast<std::size_t>(alpha));
  throw ValidationError("potential is not piecewise constant");
}

double Potential::operator()(const IntervalSet& geometry, int alpha, double x) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::ConstantPerInterval:
      return constants_[static_cast<std::size_t>(alpha)];
    case Kind::Sampled: {
      const auto& s = samples_[static_cast<std::size_t>(alpha)];
      const Interval& iv = geometry[alpha];
      const double cells = static_cast<double>(s.size() - 1);
      const double t = std::clamp((x - iv.a) / iv.length() * cells, 0.0, cells);
      const auto j = std::min(static_cast<std::size_t>(t), s.size() - 2);
      const double frac = t - static_cast<double>(j);
      return (1.0 - frac) * s[j] + frac * s[j + 1];
    }
    case Kind::Callable:
      return fn_(alpha, x);
  }
  return 0.0;
}

double Potential::minimum(const IntervalSet& geometry) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::ConstantPerInterval:
      return *std::min_element(constants_.begin(), constants_.end());
    case Kind::Sampled: {
      double lo = std::numeric_limits<double>::infinity();
      for (const auto& s : samples_) lo = std::min(lo, *std::min_element(s.begin(), s.end()));
      return lo;
    }
    case Kind::Callable: {
      constexpr int kSamples = 4096;
      double lo = std::numeric_limits<double>::infinity();
      for (int alpha = 0; alpha < geometry.size(); ++alpha) {
        const Interval& iv = geometry[alpha];
        for (int k = 0; k <= kSamples; ++k) {
          lo = std::min(lo, fn_(alpha, iv.a + iv.length() * k / kSamples));
        }
      }
      return lo;
    }
  }
  return 0.0;
}

void Potential::check_compatible(const IntervalSet& geometry) const {
  const auto n = static_cast<std::size_t>(geometry.size());
  std::size_t given = n;
  if (kind_ == Kind::ConstantPerInterval) given = constants_.size();
  if (kind_ == Kind::Sampled) given = samples_.size();
  if (given != n) {
    std::ostringstream os;
    os << label_ << " potential describes " << given << " intervals but the geometry has " << n;
    throw ValidationError(os.str());
  }
}

}  // namespace saext
