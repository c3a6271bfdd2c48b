#include "hominv/hypotheses.hpp"

#include "hominv/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace hominv {

namespace {

constexpr std::size_t kRefineStarts = 4;

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

double sq_norm_objective(const MapSpec& m, const Vector& x, Vector* grad, double sign) {
    const Vector f = eval_map(m, x);
    if (grad) *grad = sign * 2.0 * eval_jacobian(m, x).transpose() * f;
    return sign * f.squaredNorm();
}

double log_abs_det_objective(const MapSpec& m, const Vector& x, Vector* grad) {
    const Matrix J = eval_jacobian(m, x);
    const Eigen::PartialPivLU<Matrix> lu(J);
    const double det = lu.determinant();
    if (det == 0.0 || !std::isfinite(det)) {
        if (grad) *grad = Vector::Zero(x.size());
        return -std::numeric_limits<double>::infinity();
    }
    if (grad) {
        // d log|det J| = tr(J^-1 dJ), with dJ from central differences of J.
        constexpr double h = 1e-6;
        grad->resize(x.size());
        Vector xp = x, xm = x;
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            xp[k] = x[k] + h;
            xm[k] = x[k] - h;
            const Matrix dJ = (eval_jacobian(m, xp) - eval_jacobian(m, xm)) / (xp[k] - xm[k]);
            (*grad)[k] = lu.solve(dJ).trace();
            xp[k] = x[k];
            xm[k] = x[k];
        }
    }
    return std::log(std::abs(det));
}

/// Indices of the k smallest values, ties broken by index.
std::vector<std::size_t> smallest(const std::vector<double>& values, std::size_t k) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    k = std::min(k, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (values[a] != values[b]) return values[a] < values[b];
                          return a < b;
                      });
    idx.resize(k);
    return idx;
}

} // namespace

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::MetButLowDimension: return "hypotheses-met-but-n<3";
    }
    return "fail";
}

SphereMinimum minimize_on_sphere(const SphereObjective& objective, Vector start, int max_iterations,
                                 double min_step) {
    SphereMinimum out;
    out.point = start.normalized();
    Vector grad;
    out.value = objective(out.point, &grad);

    double alpha = 0.5;
    for (int it = 0; it < max_iterations; ++it) {
        if (!std::isfinite(out.value)) break;
        const Vector& x = out.point;
        const Vector tangent = grad - grad.dot(x) * x;
        const double gnorm = tangent.norm();
        if (!(gnorm > 0.0) || !std::isfinite(gnorm)) break;
        const Vector dir = -tangent / gnorm;

        alpha = std::min(2.0 * alpha, 1.0);
        bool accepted = false;
        Vector trial;
        double trial_value = 0.0;
        while (alpha >= min_step) {
            trial = (std::cos(alpha) * x + std::sin(alpha) * dir).normalized();
            trial_value = objective(trial, nullptr);
            if (trial_value <= out.value - 1e-4 * alpha * gnorm) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
        out.point = trial;
        out.value = std::isfinite(trial_value) ? objective(out.point, &grad) : trial_value;
        out.iterations = it + 1;
        if (alpha < min_step) break;
    }
    return out;
}

ExtremaEstimate estimate_extrema(const MapSpec& m, const SphereSample& s) {
    if (s.points.empty()) throw Error(ErrorKind::InvalidParameter, "empty sphere sample");
    std::vector<double> norms(s.points.size());
    std::vector<double> negated(s.points.size());
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        norms[i] = eval_map(m, s.points[i]).norm();
        negated[i] = -norms[i];
    }

    ExtremaEstimate e;
    const auto lo = smallest(norms, kRefineStarts);
    const auto hi = smallest(negated, kRefineStarts);
    e.c0_sampled = e.c0_empirical = norms[lo.front()];
    e.C_sampled = e.C_empirical = norms[hi.front()];
    e.argmin = s.points[lo.front()];
    e.argmax = s.points[hi.front()];

    const SphereObjective minimize = [&m](const Vector& x, Vector* g) { return sq_norm_objective(m, x, g, 1.0); };
    const SphereObjective maximize = [&m](const Vector& x, Vector* g) { return sq_norm_objective(m, x, g, -1.0); };
    for (auto i : lo) {
        const auto r = minimize_on_sphere(minimize, s.points[i]);
        const double v = eval_map(m, r.point).norm();
        if (v < e.c0_empirical) {
            e.c0_empirical = v;
            e.argmin = r.point;
        }
    }
    for (auto i : hi) {
        const auto r = minimize_on_sphere(maximize, s.points[i]);
        const double v = eval_map(m, r.point).norm();
        if (v > e.C_empirical) {
            e.C_empirical = v;
            e.argmax = r.point;
        }
    }
    return e;
}

double certify_c0_lower(double c0_empirical, double covering_radius, double lipschitz) {
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
        throw Error(ErrorKind::InvalidParameter, "Lipschitz bound must be positive");
    }
    return std::max(0.0, c0_empirical - lipschitz * covering_radius);
}

double certify_c0_lower(const MapSpec& m, const SphereSample& s, double lipschitz) {
    if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
        throw Error(ErrorKind::InvalidParameter, "Lipschitz bound must be positive");
    }
    return certify_c0_lower(estimate_extrema(m, s).c0_empirical, s.covering_radius_estimate, lipschitz);
}

JacobianCheck check_jacobian_nonvanishing(const MapSpec& m, const SphereSample& s) {
    if (s.points.empty()) throw Error(ErrorKind::InvalidParameter, "empty sphere sample");
    std::vector<double> dets(s.points.size());
    for (std::size_t i = 0; i < s.points.size(); ++i) dets[i] = std::abs(eval_jacobian(m, s.points[i]).determinant());

    JacobianCheck out;
    const auto lo = smallest(dets, kRefineStarts);
    out.min_abs_det = dets[lo.front()];
    out.argmin = s.points[lo.front()];

    const SphereObjective objective = [&m](const Vector& x, Vector* g) { return log_abs_det_objective(m, x, g); };
    for (auto i : lo) {
        if (out.min_abs_det == 0.0) break;
        const auto r = minimize_on_sphere(objective, s.points[i]);
        const double v = std::abs(eval_jacobian(m, r.point).determinant());
        if (v < out.min_abs_det) {
            out.min_abs_det = v;
            out.argmin = r.point;
        }
    }
    out.pass = out.min_abs_det > kJacobianTolerance;
    return out;
}

double homogeneity_residual_at(const MapSpec& m, const Vector& xi, double tau) {
    const Vector f1 = eval_map(m, xi);
    const Vector ft = eval_map(m, Vector(tau * xi));
    const double scale = std::pow(tau, m.kappa());
    return (ft - scale * f1).norm() / (scale * std::max(1.0, f1.norm()));
}

double homogeneity_residual(const MapSpec& m, std::uint64_t seed, std::size_t count) {
    static constexpr double fixed_taus[] = {1e-3, 1e-2, 1e-1, 1e1, 1e2, 1e3};
    std::mt19937_64 rng(seed ^ 0x5bd1e995u);
    std::uniform_real_distribution<double> exponent(-3.0, 3.0);
    const auto dirs = sphere_points(m.n(), std::max<std::size_t>(count, 1), seed ^ 0x27d4eb2fu);

    double worst = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double tau = i < std::size(fixed_taus) ? fixed_taus[i] : std::pow(10.0, exponent(rng));
        const double r = homogeneity_residual_at(m, dirs[i % dirs.size()], tau);
        if (!(r <= worst)) worst = r; // propagates NaN
    }
    return worst;
}

std::size_t default_sample_count(std::size_t n) { return 10000 * n; }

HypothesisReport check_hypotheses(const MapSpec& m, std::optional<std::size_t> N, std::uint64_t seed) {
    HypothesisReport r;
    r.n = m.n();
    r.kappa = m.kappa();
    r.seed = seed;
    r.default_sample_count = !N.has_value();
    const SphereSample s = sample_sphere(m.n(), N.value_or(default_sample_count(m.n())), seed);
    r.sample_count = s.count;
    r.covering_radius_estimate = s.covering_radius_estimate;

    r.homogeneity_residual = homogeneity_residual(m, seed);
    const ExtremaEstimate e = estimate_extrema(m, s);
    r.c0_empirical = e.c0_empirical;
    r.C_empirical = e.C_empirical;
    r.c0_sampled = e.c0_sampled;
    r.C_sampled = e.C_sampled;
    if (const auto* p = m.poly()) {
        const double L = polynomial_lipschitz_bound(*p);
        if (L > 0.0) {
            r.lipschitz_bound = L;
            r.c0_lower = certify_c0_lower(e.c0_empirical, s.covering_radius_estimate, L);
        } else {
            r.c0_lower = 0.0;
        }
    }
    const JacobianCheck jac = check_jacobian_nonvanishing(m, s);
    r.min_abs_det_j = jac.min_abs_det;
    r.n_verdict = m.n() >= 3;

    if (!(r.homogeneity_residual <= kHomogeneityTolerance)) {
        r.reasons.push_back("homogeneity residual " + sci(r.homogeneity_residual) + " exceeds " +
                            sci(kHomogeneityTolerance));
    }
    if (!std::isfinite(r.c0_empirical) || !std::isfinite(r.C_empirical)) {
        r.reasons.push_back("map takes non-finite values on the unit sphere");
    } else if (!(r.c0_empirical > kJacobianTolerance * std::max(1.0, r.C_empirical))) {
        r.reasons.push_back("map vanishes on the unit sphere (min |f| = " + sci(r.c0_empirical) + ")");
    }
    if (!jac.pass) {
        r.reasons.push_back("Jacobian vanishes on the unit sphere (min |det Df| = " + sci(jac.min_abs_det) + ")");
    }
    if (!r.reasons.empty()) {
        r.overall = Verdict::Fail;
    } else if (!r.n_verdict) {
        r.overall = Verdict::MetButLowDimension;
        r.reasons.push_back("n = " + std::to_string(m.n()) +
                            " < 3: bijectivity is not guaranteed (the complex square map is two-to-one)");
    } else {
        r.overall = Verdict::Pass;
    }
    return r;
}

Bracket coercivity_bracket(const HypothesisReport& report, const Vector& eta, double kappa) {
    if (!(kappa > 0.0)) throw Error(ErrorKind::InvalidParameter, "kappa must be positive");
    if (!(report.c0_empirical > 0.0)) {
        throw Error(ErrorKind::NoBracket, "no coercivity bracket: min |f| on the sphere is not positive");
    }
    const double a = eta.norm();
    if (a == 0.0) return {0.0, 0.0};
    return {std::pow(a / report.C_empirical, 1.0 / kappa), std::pow(a / report.c0_empirical, 1.0 / kappa)};
}

} // namespace hominv
