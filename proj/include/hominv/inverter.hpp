#pragma once

#include "hominv/error.hpp"
#include "hominv/hypotheses.hpp"
#include "hominv/map.hpp"

#include <optional>
#include <vector>

namespace hominv {

struct ContinuationConfig {
    double tol = 1e-10;         ///< target residual, relative to max(1, |eta|)
    double initial_step = 0.1;  ///< in path parameter t
    double min_step = 1e-8;
    int max_newton = 20;
    int seed_attempts = 16;
    bool force = false;         ///< run even if the hypothesis verdict is not pass
    bool trace = false;         ///< record waypoints
};

/// Throws Error(InvalidParameter) unless 0 < min_step <= initial_step <= 1,
/// tol > 0, max_newton >= 1 and seed_attempts >= 1.
void validate(const ContinuationConfig& cfg);

struct Waypoint {
    double t = 0.0;
    Vector gamma;
    Vector xi;
};

class ContinuationFailure : public Error {
public:
    ContinuationFailure(const std::string& what, Waypoint last)
        : Error(ErrorKind::ContinuationFailed, what), last_(std::move(last)) {}

    const Waypoint& last_waypoint() const noexcept { return last_; }

private:
    Waypoint last_;
};

/// Origin-avoiding path from eta0 to eta: the magnitude interpolates
/// geometrically and the direction follows the great circle. Antipodal
/// endpoints (|u0 + u1| < 1e-8) are joined through a waypoint orthogonal to
/// both, with the turn at t = 1/2.
class SlerpPath {
public:
    SlerpPath(const Vector& eta0, const Vector& eta);

    Vector operator()(double t) const;
    Vector derivative(double t) const;
    bool has_waypoint() const { return waypoint_.has_value(); }

private:
    struct Arc {
        Vector from, to;
        double angle = 0.0;
        Vector direction(double s) const;
        Vector direction_derivative(double s) const;
    };

    double log_ratio_ = 0.0;
    double start_norm_ = 1.0;
    std::optional<Vector> waypoint_;
    std::vector<Arc> arcs_;
};

Vector slerp_path(const Vector& eta0, const Vector& eta, double t);

struct InversionResult {
    Vector xi;
    double residual = 0.0;
    int steps = 0;
    int newton_iters_total = 0;
    Bracket bracket;
    int seed_attempts_used = 0;
    bool forced = false;
    std::vector<Waypoint> path_waypoints;
};

struct LiftResult {
    Vector xi;
    int steps = 0;
    int newton_iters = 0;
    std::vector<Waypoint> waypoints;
};

/// Tracks the solution of f(xi) = gamma(t), gamma = SlerpPath(f(start), target),
/// from xi = start at t = 0 to t = 1 with an Euler predictor and Newton
/// corrector, then polishes at t = 1. Throws ContinuationFailure when the
/// step underflows and Error(SingularJacobian) on a numerically singular Df.
LiftResult lift_path(const MapSpec& m, const Vector& start, const Vector& target, const ContinuationConfig& cfg);

/// Solves Df(xi) d = rhs by partial-pivot LU; throws Error(SingularJacobian)
/// when |det| < 1e-12 * (product of row norms).
Vector solve_jacobian(const Matrix& J, const Vector& rhs);

/// Global inverse of an admissible map. Reusable across targets: the seed
/// pool (sphere points and their images) is computed once.
class Inverter {
public:
    Inverter(MapSpec m, HypothesisReport report, ContinuationConfig cfg = {});

    /// f^-1(eta). eta = 0 maps to 0. Other targets are reduced to the unit
    /// target eta/|eta|, lifted from the seed whose image direction is
    /// closest, and rescaled by |eta|^(1/kappa).
    InversionResult invert(const Vector& eta) const;

    const MapSpec& map() const { return m_; }
    const HypothesisReport& report() const { return report_; }
    const ContinuationConfig& config() const { return cfg_; }

private:
    InversionResult invert_unit(const Vector& omega) const;

    MapSpec m_;
    HypothesisReport report_;
    ContinuationConfig cfg_;
    std::vector<Vector> seeds_;
    std::vector<Vector> seed_directions_; // f(seed)/|f(seed)|
};

/// Throws Error(Precondition) unless the report passed, or cfg.force is set.
InversionResult invert(const MapSpec& m, const Vector& eta, const ContinuationConfig& cfg,
                       const HypothesisReport& report);

/// Max over tau of |f^-1(tau eta) - tau^(1/kappa) f^-1(eta)| / (tau^(1/kappa) |f^-1(eta)|).
double inverse_homogeneity_check(const MapSpec& m, const Vector& eta, const std::vector<double>& taus,
                                 const ContinuationConfig& cfg, const HypothesisReport& report);

/// Max over targets of |f(f^-1(eta)) - eta| / |eta|.
double roundtrip_check(const MapSpec& m, const std::vector<Vector>& etas, const ContinuationConfig& cfg,
                       const HypothesisReport& report);

/// Derivative of the inverse at eta = f(xi): Df(xi)^-1.
Matrix inverse_jacobian(const MapSpec& m, const Vector& xi);

} // namespace hominv
