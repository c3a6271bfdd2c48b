#pragma once

// Independent reference computations for tests. Nothing here calls the
// library's Jacobian, extremum search, inverter or nearest-neighbour code.

#include "hominv/map.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using hominv::Matrix;
using hominv::Vector;

/// Central differences with a fixed step.
inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x, double h = 1e-6) {
    const auto n = x.size();
    Matrix J(f(x).size(), n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Vector xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return J;
}

/// O(N^2) maximum nearest-neighbour distance.
inline double brute_force_max_nn(const std::vector<Vector>& pts) {
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (i != j) best = std::min(best, (pts[i] - pts[j]).squaredNorm());
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

/// Dense (theta, phi) grid on S^2.
inline std::vector<Vector> sphere_grid3(int resolution) {
    std::vector<Vector> pts;
    for (int i = 0; i <= resolution; ++i) {
        const double theta = std::numbers::pi * i / resolution;
        for (int k = 0; k < 2 * resolution; ++k) {
            const double phi = std::numbers::pi * k / resolution;
            Vector p(3);
            p << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
            pts.push_back(p);
        }
    }
    return pts;
}

/// Closed-form inverse of |x|^(kappa-1) diag(d) x: u |u|^((1-kappa)/kappa), u = diag(d)^-1 eta.
inline Vector radial_linear_inverse(const std::vector<double>& d, double kappa, const Vector& eta) {
    Vector u = eta;
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] /= d[static_cast<std::size_t>(i)];
    return u * std::pow(u.norm(), (1.0 - kappa) / kappa);
}

/// Random polynomial map with `terms` monomials per component, all of total degree d.
inline hominv::PolyMap random_poly_map(std::mt19937_64& rng, std::size_t n, std::uint32_t d, int terms) {
    std::uniform_int_distribution<std::size_t> var(0, n - 1);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> mag(-3, 3);
    std::uniform_int_distribution<int> kind(0, 3);
    hominv::PolyMap p;
    p.n = n;
    p.degree = d;
    p.components.resize(n);
    for (auto& comp : p.components) {
        for (int t = 0; t < terms; ++t) {
            std::vector<std::uint32_t> e(n, 0);
            for (std::uint32_t k = 0; k < d; ++k) ++e[var(rng)];
            double c = 0.0;
            switch (kind(rng)) {
            case 0: c = static_cast<double>(static_cast<int>(mant(rng) * 10)); break;  // small integers, incl. 0, +-1
            case 1: c = 1.0 / static_cast<double>(1 + var(rng)); break;                  // rationals
            default: c = mant(rng) * std::pow(10.0, mag(rng)); break;
            }
            comp.terms.push_back({c, e});
        }
    }
    return p;
}

/// Random single-character edits of `src`.
inline std::string mutate(const std::string& src, std::mt19937_64& rng) {
    static const std::string alphabet = "x f n kappa 0123456789+-*/^=;.eE\n\t #@()\xff";
    std::string s = src;
    std::uniform_int_distribution<int> edits(1, 4);
    std::uniform_int_distribution<int> op(0, 2);
    std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
    const int count = edits(rng);
    for (int e = 0; e < count; ++e) {
        std::uniform_int_distribution<std::size_t> at(0, s.empty() ? 0 : s.size() - 1);
        switch (op(rng)) {
        case 0: s.insert(s.begin() + static_cast<std::ptrdiff_t>(s.empty() ? 0 : at(rng)), alphabet[ch(rng)]); break;
        case 1: if (!s.empty()) s.erase(at(rng), 1); break;
        default: if (!s.empty()) s[at(rng)] = alphabet[ch(rng)]; break;
        }
    }
    return s;
}

} // namespace oracle
