#pragma once

#include "hominv/map.hpp"

#include <cstdint>
#include <vector>

namespace hominv::builtins {

/// f(x) = x.
MapSpec identity(std::size_t n);

/// f(x) = |x|^2 x on R^3, written out as a cubic polynomial map.
MapSpec radial_cube();

/// f(x) = diag(d) x, kappa = 1.
MapSpec diagonal_linear(const std::vector<double>& d);

/// f(x) = |x|^(kappa-1) diag(d) x, stored as a linear PolyMap with radial weight.
MapSpec radial_linear(const std::vector<double>& d, double kappa);

/// f(x, y) = (x^2 - y^2, 2xy): nonvanishing Jacobian off 0, yet two-to-one.
MapSpec complex_square();

/// f(x) = (x1^3, x2^3, x3^3). Jacobian vanishes on the coordinate planes.
MapSpec axis_cube();

/// f(x) = (-x1, x2, x3).
MapSpec reflection();

/// (x1^3 + x1 x2^2, x2^3 + x2 x3^2, x3^3); Jacobian vanishes where x3 = 0.
MapSpec triangular_cubic();

/// f(x) = |x|^2 x + offset as an opaque evaluator declared homogeneous of order 3.
/// Not homogeneous unless offset = 0.
MapSpec shifted_radial_cube(const Vector& offset);

/// Random admissible map |x|^(kappa-3) P(x) with
/// P(x) = |x|^2 A x + eps Q(x), A = 2I + 0.3 G, G entries in [-1, 1], and Q a
/// sparse cubic with coefficients in [-1, 1]. The perturbation is small enough
/// that det DP never vanishes off the origin.
MapSpec random_admissible(std::size_t n, double kappa, std::uint64_t seed);

} // namespace hominv::builtins
