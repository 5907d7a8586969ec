#pragma once

#include <cstddef>

#include "gmt/geometry.hpp"

namespace gmt {

struct CantorLimits {
  int max_interval_n = 12;
  int max_square_n = 10;
  std::size_t max_cells = std::size_t{1} << 22;
};

// Generation-n middle-half Cantor set: base-4 digits in {0, 3}.
IntervalSet cantor_intervals(int n, const CantorLimits& lim = {});
// K_n x K_n as base-4 level-n cells.
SquareSet cantor_squares(int n, const CantorLimits& lim = {});
// Level-`depth` cells meeting the boundary of K_n x K_n.
SquareSet boundary_squares(int n, int depth, const CantorLimits& lim = {});

class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  DiscreteMeasure(SquareSet support, double mass_per_cell);

  // mass 4^-n per cell, total 1
  static DiscreteMeasure natural_cantor(int n, const CantorLimits& lim = {});
  // mass = cell area
  static DiscreteMeasure area(SquareSet support);

  const SquareSet& support() const { return support_; }
  double mass_per_cell() const { return mass_per_cell_; }
  double total() const { return mass_per_cell_ * static_cast<double>(support_.size()); }

 private:
  SquareSet support_;
  double mass_per_cell_ = 0.0;
};

struct ContentCover {
  double value = 0.0;  // sum of ball diameters
  double radius = 0.0;
  std::size_t balls = 0;
  // balls are centred on the lattice (offset + (i + 1/2) spacing)
  double spacing = 0.0;
  Point offset;
};

// Explicit cover of E by open balls of radius in [r_lo, r_hi]; value is an
// upper bound on the restricted spherical content.
ContentCover spherical_content_cover(const SquareSet& E, double r_lo, double r_hi);
double spherical_content_upper(const SquareSet& E, double r_lo, double r_hi);

}  // namespace gmt
