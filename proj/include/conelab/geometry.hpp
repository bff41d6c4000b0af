#pragma once

#include <span>

namespace conelab::geometry {

/// Euclidean distance from (r, h) to the segment {(s, s) : s in [1, 2]}.
double dist_to_segment(double r, double h);

/// Exact distance from xi (last coordinate is xi_n) to the truncated cone
/// {|xi'| = xi_n, xi_n in [1, 2]}.
double dist_to_cone(std::span<const double> xi);

/// |x'| of a point whose last coordinate is x_n.
double radial_part(std::span<const double> x);

/// Set of h with dist_to_segment(r, h) < delta: an open interval (lo, hi).
/// Returns false when empty.
bool collar_height_interval(double r, double delta, double& lo, double& hi);

}  // namespace conelab::geometry
