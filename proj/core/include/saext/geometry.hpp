#pragma once

#include <span>
#include <vector>

#include "saext/types.hpp"

namespace saext {

struct Interval {
  double a = 0.0;
  double b = 0.0;

  double length() const { return b - a; }
};

/// The manifold M as an ordered disjoint union of compact intervals.
/// Intervals are independent pieces; their coordinate ranges may overlap.
class IntervalSet {
 public:
  explicit IntervalSet(std::vector<Interval> intervals);

  int size() const { return static_cast<int>(intervals_.size()); }
  const Interval& operator[](int alpha) const { return intervals_[static_cast<std::size_t>(alpha)]; }
  const std::vector<Interval>& intervals() const { return intervals_; }
  double total_length() const { return total_length_; }

 private:
  std::vector<Interval> intervals_;
  double total_length_ = 0.0;
};

/// Uniform subdivision of every interval driven by one global resolution N.
///
/// Interval alpha (0-based) is split into r_alpha + 1 cells of width h_alpha,
/// with nodes x_k = a + k h, k = 0..r_alpha+1. Node indices k follow the
/// usual finite element numbering: 0 and r+1 are the endpoints, 1 and r the
/// endpoint-adjacent nodes.
///
/// Boundary slots are numbered l = 2*alpha (left end of alpha) and
/// l = 2*alpha+1 (right end), i.e. endpoint ordering.
class Mesh {
 public:
  const IntervalSet& geometry() const { return geometry_; }
  int resolution() const { return resolution_; }
  int interval_count() const { return geometry_.size(); }

  /// r_alpha: number of interior nodes of interval alpha.
  int interior_count(int alpha) const { return r_[static_cast<std::size_t>(alpha)]; }
  double step(int alpha) const { return h_[static_cast<std::size_t>(alpha)]; }
  std::span<const double> nodes(int alpha) const { return nodes_[static_cast<std::size_t>(alpha)]; }
  double node(int alpha, int k) const { return nodes_[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(k)]; }

  /// Dimension |r| = sum r_alpha of the approximation space.
  int dim() const { return dim_; }

  /// Global basis index of node x_1 of interval alpha. Interior nodes
  /// x_1..x_r of alpha occupy indices offset(alpha) .. offset(alpha)+r-1.
  int offset(int alpha) const { return offsets_[static_cast<std::size_t>(alpha)]; }

  /// Steps per boundary slot: h_l for l = 0..2n-1.
  RVector boundary_steps() const;
  double max_step() const;
  double min_step() const;

  friend Mesh build_mesh(const IntervalSet& geometry, int resolution);

 private:
  explicit Mesh(IntervalSet geometry) : geometry_(std::move(geometry)) {}

  IntervalSet geometry_;
  int resolution_ = 0;
  std::vector<int> r_;
  std::vector<double> h_;
  std::vector<std::vector<double>> nodes_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

/// r_alpha = floor(L_alpha * N / L) + 1, snapping quotients within 8 ulps of
/// an integer before taking the floor.
int interior_node_count(double length, int resolution, double total_length);

/// Throws ValidationError when N < 2n or some r_alpha < 2.
Mesh build_mesh(const IntervalSet& geometry, int resolution);

}  // namespace saext
