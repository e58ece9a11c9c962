#include "hmflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmflow {

RadialGrid RadialGrid::uniform(double R, int intervals) {
  return RadialGrid(R, intervals, 0);
}

RadialGrid RadialGrid::graded(double R, int base_intervals, int depth) {
  return RadialGrid(R, base_intervals, depth);
}

RadialGrid::RadialGrid(double R, int base_intervals, int depth)
    : base_intervals_(base_intervals), depth_(depth) {
  if (!(R > 0.0)) throw std::invalid_argument("grid radius must be positive");
  if (base_intervals < 2 || base_intervals % 2 != 0)
    throw std::invalid_argument("base interval count must be even and >= 2");
  if (depth < 0) throw std::invalid_argument("negative refinement depth");

  // Nodes are R * j / (N0 * 2^k); the integer form keeps refined grids nested
  // bit-for-bit.
  const long long n0 = base_intervals;
  // Innermost region [0, R*2^-depth] at spacing h0*2^-depth: n0 cells.
  const long long den = n0 << depth;
  for (long long j = 0; j <= n0; ++j)
    nodes_.push_back(R * static_cast<double>(j) / static_cast<double>(den));
  // Bands [R*2^-(k+1), R*2^-k] for k = depth-1 .. 0, spacing h0*2^-k.
  for (int k = depth - 1; k >= 0; --k) {
    const long long dk = n0 << k;
    for (long long j = n0 / 2 + 1; j <= n0; ++j)
      nodes_.push_back(R * static_cast<double>(j) / static_cast<double>(dk));
  }
  nodes_.front() = 0.0;
  nodes_.back() = R;
}

RadialGrid RadialGrid::refined() const {
  return RadialGrid(radius(), base_intervals_, depth_ + 1);
}

double RadialGrid::min_spacing() const {
  double h = nodes_[1] - nodes_[0];
  for (std::size_t i = 1; i + 1 < nodes_.size(); ++i)
    h = std::min(h, nodes_[i + 1] - nodes_[i]);
  return h;
}

std::size_t RadialGrid::locate(double r) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  if (i == 0) return 0;
  i -= 1;
  return std::min(i, nodes_.size() - 2);
}

}  // namespace hmflow
