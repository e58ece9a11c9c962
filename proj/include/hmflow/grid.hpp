#ifndef HMFLOW_GRID_HPP
#define HMFLOW_GRID_HPP

#include <cstddef>
#include <vector>

namespace hmflow {

// Radial grid on [0, R]: a uniform base mesh of `base_intervals` cells with
// `depth` dyadic refinement levels toward the origin.  Level k halves the
// spacing on [0, R*2^-k], so consecutive spacings never differ by more than a
// factor of 2 and refinement only inserts nodes (existing nodes are kept).
class RadialGrid {
 public:
  RadialGrid() = default;
  static RadialGrid uniform(double R, int intervals);
  static RadialGrid graded(double R, int base_intervals, int depth);

  // Same grid with one more refinement level near the origin.  The returned
  // node set is a superset of this one.
  RadialGrid refined() const;

  const std::vector<double>& nodes() const { return nodes_; }
  double node(std::size_t i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t intervals() const { return nodes_.size() - 1; }
  double radius() const { return nodes_.back(); }
  double min_spacing() const;
  int depth() const { return depth_; }
  int base_intervals() const { return base_intervals_; }

  // Index of the last node <= r (clamped to [0, size()-2]).
  std::size_t locate(double r) const;

 private:
  RadialGrid(double R, int base_intervals, int depth);
  std::vector<double> nodes_;
  int base_intervals_ = 0;
  int depth_ = 0;
};

}  // namespace hmflow

#endif
