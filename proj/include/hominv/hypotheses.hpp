#pragma once

#include "hominv/map.hpp"
#include "hominv/sphere.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hominv {

/// Local search on the unit sphere: normalized Riemannian gradient descent
/// with Armijo backtracking along great circles.
struct SphereMinimum {
    Vector point;
    double value = 0.0;
    int iterations = 0;
};

/// `objective` returns the value and, when its second argument is non-null,
/// writes the ambient gradient there. Stops after `max_iterations` or once the
/// accepted step falls below `min_step`.
using SphereObjective = std::function<double(const Vector&, Vector*)>;
SphereMinimum minimize_on_sphere(const SphereObjective& objective, Vector start,
                                 int max_iterations = 200, double min_step = 1e-10);

struct ExtremaEstimate {
    double c0_empirical = 0.0; ///< refined min |f| on the sphere
    double C_empirical = 0.0;  ///< refined max |f| on the sphere
    double c0_sampled = 0.0;   ///< raw sample minimum
    double C_sampled = 0.0;    ///< raw sample maximum
    Vector argmin;
    Vector argmax;
};

/// Min and max of |f| over the sample, each refined by projected gradient
/// descent (ascent) from the best few sampled candidates. The refined values
/// never lie inside the sampled range.
ExtremaEstimate estimate_extrema(const MapSpec& m, const SphereSample& s);

/// c0_empirical - L * covering_radius, floored at 0. Throws
/// Error(InvalidParameter) unless L > 0.
double certify_c0_lower(double c0_empirical, double covering_radius, double lipschitz);
double certify_c0_lower(const MapSpec& m, const SphereSample& s, double lipschitz);

struct JacobianCheck {
    double min_abs_det = 0.0;
    Vector argmin;
    bool pass = false;
};

inline constexpr double kJacobianTolerance = 1e-12;
inline constexpr double kHomogeneityTolerance = 1e-10;

/// min |det Df| over the sample, refined by descent on log|det Df|.
/// Passes iff the minimum exceeds kJacobianTolerance.
JacobianCheck check_jacobian_nonvanishing(const MapSpec& m, const SphereSample& s);

/// |f(tau xi) - tau^kappa f(xi)| / (tau^kappa max(1, |f(xi)|)) for unit xi.
double homogeneity_residual_at(const MapSpec& m, const Vector& xi, double tau);

/// Maximum of homogeneity_residual_at over `count` seeded pairs (xi, tau) with
/// tau log-uniform in [1e-3, 1e3]; the fixed scales 1e-3, 1e-2, 0.1, 10, 100
/// and 1e3 are always included.
double homogeneity_residual(const MapSpec& m, std::uint64_t seed, std::size_t count = 100);

enum class Verdict { Pass, Fail, MetButLowDimension };

const char* to_string(Verdict v);

struct HypothesisReport {
    std::size_t n = 0;
    double kappa = 0.0;
    double c0_empirical = 0.0;
    double C_empirical = 0.0;
    double c0_sampled = 0.0;
    double C_sampled = 0.0;
    std::optional<double> c0_lower; ///< heuristically certified: covering radius is estimated
    std::optional<double> lipschitz_bound;
    double covering_radius_estimate = 0.0;
    double min_abs_det_j = 0.0;
    double homogeneity_residual = 0.0;
    bool n_verdict = false; ///< n >= 3
    Verdict overall = Verdict::Fail;
    std::vector<std::string> reasons;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    bool default_sample_count = false;
};

/// Default sample size 10^4 * n.
std::size_t default_sample_count(std::size_t n);

/// Runs every sub-check. overall is Pass iff the map is homogeneous to
/// kHomogeneityTolerance, nonvanishing on the sphere, has nonvanishing
/// Jacobian there and n >= 3; when only the dimension gate fails the verdict is
/// MetButLowDimension. Deterministic for fixed (m, N, seed).
HypothesisReport check_hypotheses(const MapSpec& m, std::optional<std::size_t> N = std::nullopt,
                                  std::uint64_t seed = 1);

struct Bracket {
    double r_lo = 0.0;
    double r_hi = 0.0;
};

/// Annulus (|eta|/C)^(1/kappa) <= |xi| <= (|eta|/c0)^(1/kappa) holding every
/// preimage of eta. Returns {0, 0} for eta = 0. Throws Error(NoBracket) when
/// c0_empirical is not positive.
Bracket coercivity_bracket(const HypothesisReport& report, const Vector& eta, double kappa);

} // namespace hominv
