#pragma once

#include "hominv/map.hpp"

#include <cstdint>
#include <vector>

namespace hominv {

struct SphereSample {
    std::vector<Vector> points;
    std::size_t count = 0;
    /// Largest nearest-neighbour distance in the sample. A heuristic for the
    /// covering radius, not a bound.
    double covering_radius_estimate = 0.0;
};

/// N normalized Gaussian vectors on S^(n-1) drawn from mt19937_64(seed).
/// Exact duplicates are redrawn. The first N points of a larger sample with
/// the same seed coincide with the smaller sample. For n = 1 the sphere is
/// {-1, +1} and at most two points are returned.
SphereSample sample_sphere(std::size_t n, std::size_t N, std::uint64_t seed);

/// Same points without the nearest-neighbour pass.
std::vector<Vector> sphere_points(std::size_t n, std::size_t N, std::uint64_t seed);

/// max_i min_{j != i} |p_i - p_j|, using a k-d tree. Zero for fewer than two points.
double max_nearest_neighbor_distance(const std::vector<Vector>& points);

/// i-th point (1-based) of the Halton sequence in `dim` dimensions.
std::vector<double> halton(std::uint64_t index, std::size_t dim);

} // namespace hominv
