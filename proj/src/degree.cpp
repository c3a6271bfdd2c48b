#include "hominv/degree.hpp"

#include "hominv/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace hominv {

namespace {

constexpr double kDedupFactor = 1e-6;
constexpr int kNewtonIterations = 60;

/// Damped Newton on f(x) = eta, finished with undamped polishing steps.
std::optional<Vector> newton_root(const MapSpec& m, Vector x, const Vector& eta, double tol, double floor_radius) {
    double rn = (eval_map(m, x) - eta).norm();
    for (int k = 0; k < kNewtonIterations; ++k) {
        if (rn <= tol) break;
        Vector step;
        try {
            step = solve_jacobian(eval_jacobian(m, x), eval_map(m, x) - eta);
        } catch (const Error&) {
            return std::nullopt;
        }
        double lambda = 1.0;
        bool moved = false;
        while (lambda >= 1.0 / 1024.0) {
            const Vector trial = x - lambda * step;
            if (trial.allFinite() && trial.norm() > floor_radius) {
                const double trial_rn = (eval_map(m, trial) - eta).norm();
                if (trial_rn <= (1.0 - 1e-4 * lambda) * rn) {
                    x = trial;
                    rn = trial_rn;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!moved) return std::nullopt;
    }
    if (!(rn <= tol)) return std::nullopt;
    for (int k = 0; k < 3; ++k) {
        Vector step;
        try {
            step = solve_jacobian(eval_jacobian(m, x), eval_map(m, x) - eta);
        } catch (const Error&) {
            break;
        }
        const Vector trial = x - step;
        const double trial_rn = (eval_map(m, trial) - eta).norm();
        if (!(trial_rn < rn)) break;
        x = trial;
        rn = trial_rn;
    }
    return x;
}

} // namespace

int default_starts(std::size_t n) { return 64 * static_cast<int>(n); }

std::vector<Preimage> count_preimages(const MapSpec& m, const Vector& eta, int starts, const ContinuationConfig& cfg,
                                      const HypothesisReport& report) {
    validate(cfg);
    if (static_cast<std::size_t>(eta.size()) != m.n() || !eta.allFinite()) {
        throw Error(ErrorKind::InvalidInput, "target must be finite with the map's dimension");
    }
    if (eta.isZero(0.0)) throw Error(ErrorKind::InvalidInput, "preimage counting needs eta != 0");
    if (starts < 1) throw Error(ErrorKind::InvalidParameter, "starts must be positive");
    if (report.n != m.n()) throw Error(ErrorKind::Precondition, "hypothesis report was made for another map");
    if (report.overall == Verdict::Fail && !cfg.force) {
        throw Error(ErrorKind::Precondition, "hypotheses failed; degree is undefined without a nonvanishing Jacobian");
    }

    const Bracket b = coercivity_bracket(report, eta, m.kappa());
    const std::size_t n = m.n();
    const double tol = cfg.tol * std::max(1.0, eta.norm());
    const double floor_radius = 1e-3 * b.r_lo;
    const double log_span = std::log(b.r_hi / b.r_lo);

    std::vector<Vector> roots;
    for (int s = 0; s < starts; ++s) {
        const auto u = halton(static_cast<std::uint64_t>(s) + 1, n + 1);
        Vector dir(static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < n; ++j) dir[static_cast<Eigen::Index>(j)] = 2.0 * u[j] - 1.0;
        if (!(dir.norm() > 0.0)) continue;
        dir.normalize();
        const Vector x0 = b.r_lo * std::exp(u[n] * log_span) * dir;

        auto root = newton_root(m, x0, eta, tol, floor_radius);
        if (!root) {
            try {
                Vector lifted = lift_path(m, x0, eta, cfg).xi;
                if ((eval_map(m, lifted) - eta).norm() <= tol) root = std::move(lifted);
            } catch (const Error&) {
            }
        }
        if (root) roots.push_back(std::move(*root));
    }

    std::sort(roots.begin(), roots.end(), [](const Vector& a, const Vector& c) {
        return std::lexicographical_compare(a.begin(), a.end(), c.begin(), c.end());
    });
    const double radius = kDedupFactor * b.r_hi;
    std::vector<Preimage> out;
    for (const auto& r : roots) {
        const bool duplicate =
            std::any_of(out.begin(), out.end(), [&](const Preimage& p) { return (p.xi - r).norm() <= radius; });
        if (duplicate) continue;
        Preimage p;
        p.xi = r;
        p.det = eval_jacobian(m, r).determinant();
        p.sign = p.det > 0.0 ? 1 : (p.det < 0.0 ? -1 : 0);
        p.residual = (eval_map(m, r) - eta).norm();
        out.push_back(std::move(p));
    }
    return out;
}

DegreeReport mapping_degree(const MapSpec& m, const Vector& eta, int starts, const ContinuationConfig& cfg,
                            const HypothesisReport& report) {
    DegreeReport d;
    d.value = eta;
    d.starts = starts;
    d.recheck_starts = 4 * starts;
    auto first = count_preimages(m, eta, starts, cfg, report);
    auto second = count_preimages(m, eta, d.recheck_starts, cfg, report);
    d.possible_missed_roots = first.size() != second.size();
    d.preimages = second.size() >= first.size() ? std::move(second) : std::move(first);

    for (const auto& p : d.preimages) {
        d.degree += p.sign;
        const double scale = eval_jacobian(m, p.xi).rowwise().norm().prod();
        if (!(std::abs(p.det) >= kJacobianTolerance * scale)) d.regular_value = false;
    }
    d.injective_evidence = d.preimages.size() == 1;
    d.note = "degree is the signed preimage count; for admissible maps with n >= 3 the value +-1 is inferred "
             "from bijectivity and the nonvanishing Jacobian";
    if (d.preimages.empty()) d.note += "; no preimage found (suspicious: the search failed)";
    return d;
}

InjectivityVerdict injectivity_probe(const MapSpec& m, int trials, int starts, const ContinuationConfig& cfg,
                                     const HypothesisReport& report, std::uint64_t seed) {
    InjectivityVerdict v;
    const auto dirs = sphere_points(m.n(), static_cast<std::size_t>(std::max(trials, 1)), seed ^ 0x85ebca6bu);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> exponent(-1.0, 1.0);
    for (int k = 0; k < trials; ++k) {
        const Vector eta = std::pow(10.0, exponent(rng)) * dirs[static_cast<std::size_t>(k) % dirs.size()];
        const auto roots = count_preimages(m, eta, starts, cfg, report);
        v.targets.push_back(eta);
        v.counts.push_back(roots.size());
        if (roots.size() != 1) v.consistent_with_injective = false;
    }
    return v;
}

} // namespace hominv
