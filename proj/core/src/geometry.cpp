#include "saext/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "saext/errors.hpp"

namespace saext {

IntervalSet::IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) {
    throw ValidationError("interval set must contain at least one interval");
  }
  for (std::size_t alpha = 0; alpha < intervals_.size(); ++alpha) {
    const auto& iv = intervals_[alpha];
    if (!std::isfinite(iv.a) || !std::isfinite(iv.b) || !(iv.a < iv.b)) {
      std::ostringstream os;
      os << "interval " << alpha << " = [" << iv.a << ", " << iv.b << "] must satisfy a < b";
      throw ValidationError(os.str());
    }
    total_length_ += iv.length();
  }
}

RVector Mesh::boundary_steps() const {
  RVector h(2 * interval_count());
  for (int alpha = 0; alpha < interval_count(); ++alpha) {
    h(2 * alpha) = step(alpha);
    h(2 * alpha + 1) = step(alpha);
  }
  return h;
}

double Mesh::max_step() const { return *std::max_element(h_.begin(), h_.end()); }

double Mesh::min_step() const { return *std::min_element(h_.begin(), h_.end()); }

int interior_node_count(double length, int resolution, double total_length) {
  double q = length * static_cast<double>(resolution) / total_length;
  const double nearest = std::round(q);
  if (std::abs(q - nearest) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(q))) {
    q = nearest;
  }
  return static_cast<int>(std::floor(q)) + 1;
}

Mesh build_mesh(const IntervalSet& geometry, int resolution) {
  const int n = geometry.size();
  if (resolution < 2 * n) {
    std::ostringstream os;
    os << "resolution N=" << resolution << " is below 2n=" << 2 * n;
    throw ValidationError(os.str());
  }

  Mesh mesh(geometry);
  mesh.resolution_ = resolution;
  const double total = geometry.total_length();
  int offset = 0;
  for (int alpha = 0; alpha < n; ++alpha) {
    const Interval& iv = geometry[alpha];
    const int r = interior_node_count(iv.length(), resolution, total);
    if (r < 2) {
      std::ostringstream os;
      os << "resolution N=" << resolution << " leaves interval " << alpha << " = [" << iv.a << ", " << iv.b
         << "] with r=" << r << " interior nodes (need at least 2)";
      throw ValidationError(os.str());
    }
    const double h = iv.length() / static_cast<double>(r + 1);
    std::vector<double> x(static_cast<std::size_t>(r + 2));
    for (int k = 0; k <= r + 1; ++k) {
      x[static_cast<std::size_t>(k)] = iv.a + h * static_cast<double>(k);
    }
    x.front() = iv.a;
    x.back() = iv.b;

    mesh.r_.push_back(r);
    mesh.h_.push_back(h);
    mesh.nodes_.push_back(std::move(x));
    mesh.offsets_.push_back(offset);
    offset += r;
  }
  mesh.dim_ = offset;
  return mesh;
}

}  // namespace saext
