#include "hominv/inverter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hominv {

namespace {

constexpr double kAntipodalTolerance = 1e-8;
constexpr double kCorrectorTolerance = 1e-9;
constexpr std::size_t kSeedPool = 2048;

void require_target(const MapSpec& m, const Vector& eta) {
    if (static_cast<std::size_t>(eta.size()) != m.n()) {
        throw Error(ErrorKind::InvalidInput, "target has dimension " + std::to_string(eta.size()) +
                                                 ", map expects " + std::to_string(m.n()));
    }
    if (!eta.allFinite()) throw Error(ErrorKind::InvalidInput, "non-finite component in target");
}

/// Newton on f(x) = target while the residual keeps decreasing.
Vector polish(const MapSpec& m, Vector x, const Vector& target, int max_iterations, int& iterations) {
    double rn = (eval_map(m, x) - target).norm();
    for (int k = 0; k < max_iterations && rn > 0.0; ++k) {
        const Vector r = eval_map(m, x) - target;
        Vector step;
        try {
            step = solve_jacobian(eval_jacobian(m, x), -r);
        } catch (const Error&) {
            break;
        }
        const Vector next = x + step;
        if (!next.allFinite() || next.isZero(0.0)) break;
        const double next_rn = (eval_map(m, next) - target).norm();
        ++iterations;
        if (!(next_rn < rn)) break;
        x = next;
        rn = next_rn;
        if (step.norm() <= 1e-16 * x.norm()) break;
    }
    return x;
}

} // namespace

void validate(const ContinuationConfig& cfg) {
    if (!(cfg.tol > 0.0) || !(cfg.min_step > 0.0) || !(cfg.min_step <= cfg.initial_step) ||
        !(cfg.initial_step <= 1.0) || cfg.max_newton < 1 || cfg.seed_attempts < 1) {
        throw Error(ErrorKind::InvalidParameter,
                    "continuation config needs tol > 0, 0 < min_step <= initial_step <= 1, max_newton >= 1 "
                    "and seed_attempts >= 1");
    }
}

Vector SlerpPath::Arc::direction(double s) const {
    if (angle < 1e-12) return ((1.0 - s) * from + s * to).normalized();
    const double sa = std::sin(angle);
    return ((std::sin((1.0 - s) * angle) / sa) * from + (std::sin(s * angle) / sa) * to).normalized();
}

Vector SlerpPath::Arc::direction_derivative(double s) const {
    if (angle < 1e-12) return to - from;
    const double sa = std::sin(angle);
    return (angle / sa) * (-std::cos((1.0 - s) * angle) * from + std::cos(s * angle) * to);
}

SlerpPath::SlerpPath(const Vector& eta0, const Vector& eta) {
    if (eta0.size() != eta.size()) throw Error(ErrorKind::InvalidInput, "path endpoints differ in dimension");
    const double a = eta0.norm();
    const double b = eta.norm();
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw Error(ErrorKind::InvalidInput, "path endpoints must be finite and nonzero");
    }
    start_norm_ = a;
    log_ratio_ = std::log(b / a);
    const Vector u0 = eta0 / a;
    const Vector u1 = eta / b;

    auto make_arc = [](const Vector& p, const Vector& q) {
        Arc arc{p, q, 2.0 * std::atan2((p - q).norm(), (p + q).norm())};
        return arc;
    };

    if ((u0 + u1).norm() < kAntipodalTolerance) {
        if (u0.size() < 2) throw Error(ErrorKind::InvalidInput, "no origin-avoiding path between antipodes in R^1");
        Eigen::Index axis = 0;
        u0.cwiseAbs().minCoeff(&axis);
        Vector w = Vector::Unit(u0.size(), axis);
        w -= w.dot(u0) * u0;
        w.normalize();
        waypoint_ = w;
        arcs_.push_back(make_arc(u0, w));
        arcs_.push_back(make_arc(w, u1));
    } else {
        arcs_.push_back(make_arc(u0, u1));
    }
}

Vector SlerpPath::operator()(double t) const {
    const double mag = start_norm_ * std::exp(t * log_ratio_);
    if (arcs_.size() == 1) return mag * arcs_[0].direction(t);
    return t <= 0.5 ? Vector(mag * arcs_[0].direction(2.0 * t)) : Vector(mag * arcs_[1].direction(2.0 * t - 1.0));
}

Vector SlerpPath::derivative(double t) const {
    const double mag = start_norm_ * std::exp(t * log_ratio_);
    Vector dir, ddir;
    if (arcs_.size() == 1) {
        dir = arcs_[0].direction(t);
        ddir = arcs_[0].direction_derivative(t);
    } else {
        const auto& arc = t < 0.5 ? arcs_[0] : arcs_[1];
        const double s = t < 0.5 ? 2.0 * t : 2.0 * t - 1.0;
        dir = arc.direction(s);
        ddir = 2.0 * arc.direction_derivative(s);
    }
    return mag * (log_ratio_ * dir + ddir);
}

Vector slerp_path(const Vector& eta0, const Vector& eta, double t) {
    if (t <= 0.0) {
        SlerpPath(eta0, eta); // validates endpoints
        return eta0;
    }
    if (t >= 1.0) {
        SlerpPath(eta0, eta);
        return eta;
    }
    return SlerpPath(eta0, eta)(t);
}

Vector solve_jacobian(const Matrix& J, const Vector& rhs) {
    const Eigen::PartialPivLU<Matrix> lu(J);
    const double scale = J.rowwise().norm().prod();
    const double det = lu.determinant();
    if (!std::isfinite(det) || !(std::abs(det) >= 1e-12 * scale) || scale == 0.0) {
        throw Error(ErrorKind::SingularJacobian, "Jacobian is numerically singular");
    }
    return lu.solve(rhs);
}

LiftResult lift_path(const MapSpec& m, const Vector& start, const Vector& target, const ContinuationConfig& cfg) {
    validate(cfg);
    const Vector f0 = eval_map(m, start);
    if (!(f0.norm() > 0.0)) {
        throw ContinuationFailure("path start maps to the origin", Waypoint{0.0, f0, start});
    }
    const SlerpPath path(f0, target);
    auto gamma = [&](double t) -> Vector { return t >= 1.0 ? target : path(t); };

    LiftResult out;
    Vector xi = start;
    double t = 0.0;
    double h = cfg.initial_step;
    int easy_streak = 0;
    if (cfg.trace) out.waypoints.push_back({0.0, f0, xi});

    while (t < 1.0) {
        h = std::min(h, 1.0 - t);
        double t_next = t + h;
        if (1.0 - t_next < 1e-12) t_next = 1.0;

        const Vector tangent = solve_jacobian(eval_jacobian(m, xi), path.derivative(t));
        const Vector predicted = xi + (t_next - t) * tangent;

        bool ok = (t_next - t) * tangent.norm() <= 0.5 * xi.norm();
        Vector x = predicted;
        int iters = 0;
        if (ok) {
            ok = false;
            const Vector g = gamma(t_next);
            const double gnorm = g.norm();
            double previous = std::numeric_limits<double>::infinity();
            for (int k = 0; k <= cfg.max_newton; ++k) {
                const Vector r = eval_map(m, x) - g;
                if (r.norm() <= kCorrectorTolerance * gnorm) {
                    ok = true;
                    break;
                }
                if (k == cfg.max_newton) break;
                const Vector step = solve_jacobian(eval_jacobian(m, x), -r);
                ++iters;
                const double sn = step.norm();
                if (sn > 0.5 * previous || !std::isfinite(sn)) break;
                previous = sn;
                x += step;
                if (!(x.norm() > 0.0)) break;
            }
        }

        out.newton_iters += iters;
        if (ok) {
            xi = x;
            t = t_next;
            ++out.steps;
            if (cfg.trace) out.waypoints.push_back({t, gamma(t), xi});
            if (iters <= 3) {
                if (++easy_streak >= 3) {
                    h = std::min(2.0 * h, cfg.initial_step);
                    easy_streak = 0;
                }
            } else {
                easy_streak = 0;
            }
        } else {
            easy_streak = 0;
            h *= 0.5;
            if (h < cfg.min_step) {
                throw ContinuationFailure("continuation step fell below min_step at t = " + std::to_string(t),
                                          Waypoint{t, gamma(t), xi});
            }
        }
    }
    out.xi = polish(m, xi, target, 10, out.newton_iters);
    return out;
}

Inverter::Inverter(MapSpec m, HypothesisReport report, ContinuationConfig cfg)
    : m_(std::move(m)), report_(std::move(report)), cfg_(cfg) {
    validate(cfg_);
    const std::size_t pool = std::clamp<std::size_t>(report_.sample_count, 1, kSeedPool);
    for (auto& p : sphere_points(m_.n(), pool, report_.seed)) {
        const Vector f = eval_map(m_, p);
        const double nf = f.norm();
        if (!(nf > 0.0) || !std::isfinite(nf)) continue;
        seed_directions_.push_back(f / nf);
        seeds_.push_back(std::move(p));
    }
}

InversionResult Inverter::invert_unit(const Vector& omega) const {
    std::vector<std::size_t> order(seeds_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> align(seeds_.size());
    for (std::size_t i = 0; i < seeds_.size(); ++i) align[i] = seed_directions_[i].dot(omega);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return align[a] > align[b]; });

    const std::size_t attempts = std::min<std::size_t>(order.size(), static_cast<std::size_t>(cfg_.seed_attempts));
    std::optional<ContinuationFailure> last_failure;
    bool saw_singular = false;
    InversionResult res;
    for (std::size_t a = 0; a < attempts; ++a) {
        res.seed_attempts_used = static_cast<int>(a + 1);
        try {
            LiftResult lift = lift_path(m_, seeds_[order[a]], omega, cfg_);
            res.steps += lift.steps;
            res.newton_iters_total += lift.newton_iters;
            const double r = (eval_map(m_, lift.xi) - omega).norm();
            if (r <= cfg_.tol) {
                res.xi = std::move(lift.xi);
                res.residual = r;
                res.path_waypoints = std::move(lift.waypoints);
                return res;
            }
            last_failure.emplace("corrected endpoint residual above tolerance", Waypoint{1.0, omega, lift.xi});
        } catch (const ContinuationFailure& e) {
            last_failure = e;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SingularJacobian) throw;
            saw_singular = true;
        }
    }
    if (saw_singular) {
        throw Error(ErrorKind::SingularJacobian,
                    "singular Jacobian encountered along every attempted path (hypothesis violation evidence)");
    }
    if (last_failure) throw *last_failure;
    throw ContinuationFailure("no usable seed: map vanishes on the seed pool", Waypoint{0.0, omega, omega});
}

InversionResult Inverter::invert(const Vector& eta) const {
    require_target(m_, eta);
    if (report_.n != m_.n()) throw Error(ErrorKind::Precondition, "hypothesis report was made for another map");
    if (report_.overall != Verdict::Pass && !cfg_.force) {
        throw Error(ErrorKind::Precondition,
                    std::string("hypotheses not met (") + to_string(report_.overall) + "); use force to override");
    }

    InversionResult res;
    res.forced = report_.overall != Verdict::Pass;
    const double a = eta.norm();
    if (a == 0.0) {
        res.xi = extend_at_origin(m_);
        return res;
    }
    if (report_.c0_empirical > 0.0) {
        res.bracket = coercivity_bracket(report_, eta, m_.kappa());
    } else {
        res.bracket = {report_.C_empirical > 0.0 ? std::pow(a / report_.C_empirical, 1.0 / m_.kappa()) : 0.0,
                       std::numeric_limits<double>::infinity()};
    }

    const Vector omega = eta / a;
    InversionResult unit = invert_unit(omega);
    const double scale = std::pow(a, 1.0 / m_.kappa());
    res.xi = scale * unit.xi;
    res.steps = unit.steps;
    res.newton_iters_total = unit.newton_iters_total;
    res.seed_attempts_used = unit.seed_attempts_used;
    if (cfg_.trace) {
        for (auto& w : unit.path_waypoints) res.path_waypoints.push_back({w.t, a * w.gamma, scale * w.xi});
    }

    const double allowed = cfg_.tol * std::max(1.0, a);
    res.residual = (eval_map(m_, res.xi) - eta).norm();
    if (res.residual > allowed) {
        res.xi = polish(m_, res.xi, eta, 5, res.newton_iters_total);
        res.residual = (eval_map(m_, res.xi) - eta).norm();
        if (res.residual > allowed) {
            throw ContinuationFailure("residual " + std::to_string(res.residual) + " above tolerance after rescaling",
                                      Waypoint{1.0, eta, res.xi});
        }
    }
    return res;
}

InversionResult invert(const MapSpec& m, const Vector& eta, const ContinuationConfig& cfg,
                       const HypothesisReport& report) {
    if (report.overall != Verdict::Pass && !cfg.force) {
        throw Error(ErrorKind::Precondition,
                    std::string("hypotheses not met (") + to_string(report.overall) + "); use force to override");
    }
    return Inverter(m, report, cfg).invert(eta);
}

double inverse_homogeneity_check(const MapSpec& m, const Vector& eta, const std::vector<double>& taus,
                                 const ContinuationConfig& cfg, const HypothesisReport& report) {
    if (eta.isZero(0.0)) throw Error(ErrorKind::InvalidInput, "inverse homogeneity needs eta != 0");
    const Inverter inv(m, report, cfg);
    const Vector base = inv.invert(eta).xi;
    double worst = 0.0;
    for (double tau : taus) {
        if (!(tau > 0.0)) throw Error(ErrorKind::InvalidParameter, "scale factors must be positive");
        const double s = std::pow(tau, 1.0 / m.kappa());
        const Vector scaled = inv.invert(Vector(tau * eta)).xi;
        worst = std::max(worst, (scaled - s * base).norm() / (s * base.norm()));
    }
    return worst;
}

double roundtrip_check(const MapSpec& m, const std::vector<Vector>& etas, const ContinuationConfig& cfg,
                       const HypothesisReport& report) {
    const Inverter inv(m, report, cfg);
    double worst = 0.0;
    for (const auto& eta : etas) {
        const double a = eta.norm();
        if (a == 0.0) continue;
        const Vector xi = inv.invert(eta).xi;
        worst = std::max(worst, (eval_map(m, xi) - eta).norm() / a);
    }
    return worst;
}

Matrix inverse_jacobian(const MapSpec& m, const Vector& xi) {
    const Matrix J = eval_jacobian(m, xi);
    Matrix inv(J.rows(), J.cols());
    for (Eigen::Index j = 0; j < J.cols(); ++j) inv.col(j) = solve_jacobian(J, Vector::Unit(J.rows(), j));
    return inv;
}

} // namespace hominv
