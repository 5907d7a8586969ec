#pragma once

#include <cstdint>

#include "gmt/geometry.hpp"

namespace gmt {

struct NeedleEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::int64_t hits = 0;
};

// Buffon-needle Monte Carlo for the Favard length: uniform random lines
// {x . omega = c} meeting the bounding disc, hit-tested against a quadtree of
// the occupied cells. Not used by any certified computation.
NeedleEstimate needle_favard(const SquareSet& E, std::int64_t samples, std::uint64_t seed);

}  // namespace gmt
