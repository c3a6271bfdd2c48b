#include "hominv/map.hpp"

#include "hominv/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace hominv {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::UndefinedAtOrigin: return "undefined-at-origin";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::ContinuationFailed: return "continuation-failed";
    case ErrorKind::SingularJacobian: return "singular-jacobian";
    case ErrorKind::NoBracket: return "no-bracket";
    }
    return "unknown";
}

std::uint32_t Term::total_degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), std::uint32_t{0});
}

bool grlex_greater(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    const auto da = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
    const auto db = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
    if (da != db) return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

struct GrlexLess {
    bool operator()(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
        return grlex_greater(a, b);
    }
};

Polynomial canonical_polynomial(const Polynomial& p) {
    std::map<std::vector<std::uint32_t>, double, GrlexLess> merged;
    for (const auto& t : p.terms) merged[t.exponents] += t.coeff;
    Polynomial out;
    for (auto& [exps, c] : merged) {
        if (c != 0.0) out.terms.push_back(Term{c, exps});
    }
    return out;
}

double ipow(double x, std::uint32_t e) {
    double r = 1.0;
    while (e) {
        if (e & 1u) r *= x;
        x *= x;
        e >>= 1u;
    }
    return r;
}

double eval_polynomial(const Polynomial& p, const Vector& x) {
    double s = 0.0;
    for (const auto& t : p.terms) {
        double v = t.coeff;
        for (std::size_t j = 0; j < t.exponents.size(); ++j) {
            if (t.exponents[j]) v *= ipow(x[static_cast<Eigen::Index>(j)], t.exponents[j]);
        }
        s += v;
    }
    return s;
}

Polynomial differentiate(const Polynomial& p, std::size_t var) {
    Polynomial d;
    for (const auto& t : p.terms) {
        if (t.exponents[var] == 0) continue;
        Term dt = t;
        dt.coeff *= static_cast<double>(t.exponents[var]);
        dt.exponents[var] -= 1;
        d.terms.push_back(std::move(dt));
    }
    return canonical_polynomial(d);
}

void require_finite(const Vector& xi) {
    if (!xi.allFinite()) throw Error(ErrorKind::InvalidInput, "non-finite component in input point");
}

void require_size(const MapSpec& m, const Vector& xi) {
    if (static_cast<std::size_t>(xi.size()) != m.n()) {
        throw Error(ErrorKind::InvalidInput, "point has dimension " + std::to_string(xi.size()) +
                                                 ", map expects " + std::to_string(m.n()));
    }
}

Matrix central_difference_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& xi) {
    const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, xi.norm());
    const auto n = xi.size();
    Matrix J(n, n);
    Vector xp = xi;
    Vector xm = xi;
    for (Eigen::Index j = 0; j < n; ++j) {
        xp[j] = xi[j] + h;
        xm[j] = xi[j] - h;
        J.col(j) = (f(xp) - f(xm)) / (xp[j] - xm[j]);
        xp[j] = xi[j];
        xm[j] = xi[j];
    }
    return J;
}

} // namespace

PolyMap canonicalize(PolyMap p) {
    for (auto& c : p.components) c = canonical_polynomial(c);
    return p;
}

Vector eval_polynomial_map(const PolyMap& p, const Vector& x) {
    Vector out(static_cast<Eigen::Index>(p.n));
    for (std::size_t i = 0; i < p.n; ++i) out[static_cast<Eigen::Index>(i)] = eval_polynomial(p.components[i], x);
    return out;
}

MapSpec MapSpec::polynomial(PolyMap p, std::optional<double> kappa) {
    if (p.n == 0) throw Error(ErrorKind::InvalidParameter, "map dimension must be at least 1");
    if (p.components.size() != p.n) {
        throw Error(ErrorKind::InvalidParameter, "map has " + std::to_string(p.components.size()) +
                                                     " components, expected " + std::to_string(p.n));
    }
    if (p.degree == 0) throw Error(ErrorKind::InvalidParameter, "polynomial degree must be at least 1");
    for (const auto& comp : p.components) {
        for (const auto& t : comp.terms) {
            if (t.exponents.size() != p.n) throw Error(ErrorKind::InvalidParameter, "monomial has wrong arity");
            if (!std::isfinite(t.coeff)) throw Error(ErrorKind::InvalidParameter, "non-finite coefficient");
            if (t.coeff != 0.0 && t.total_degree() != p.degree) {
                throw Error(ErrorKind::InvalidParameter, "polynomial map is not homogeneous of degree " +
                                                             std::to_string(p.degree));
            }
        }
    }
    const double k = kappa.value_or(static_cast<double>(p.degree));
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::InvalidParameter, "kappa must be a positive real");

    MapSpec m;
    m.n_ = p.n;
    m.kappa_ = k;
    m.radial_exponent_ = k - static_cast<double>(p.degree);

    auto derivs = std::make_shared<std::vector<Polynomial>>();
    derivs->reserve(p.n * p.n);
    for (std::size_t i = 0; i < p.n; ++i)
        for (std::size_t j = 0; j < p.n; ++j) derivs->push_back(differentiate(p.components[i], j));
    m.derivatives_ = std::move(derivs);
    m.body_ = std::move(p);
    return m;
}

MapSpec MapSpec::black_box(std::size_t n, BlackBox body) {
    if (n == 0) throw Error(ErrorKind::InvalidParameter, "map dimension must be at least 1");
    if (!body.eval) throw Error(ErrorKind::InvalidParameter, "black-box map needs an evaluator");
    if (!(body.declared_kappa > 0.0) || !std::isfinite(body.declared_kappa)) {
        throw Error(ErrorKind::InvalidParameter, "kappa must be a positive real");
    }
    MapSpec m;
    m.n_ = n;
    m.kappa_ = body.declared_kappa;
    m.radial_exponent_ = 0.0;
    m.body_ = std::move(body);
    m.derivatives_ = std::make_shared<std::vector<Polynomial>>();
    return m;
}

const std::vector<Polynomial>& MapSpec::poly_derivatives() const { return *derivatives_; }

Vector eval_map(const MapSpec& m, const Vector& xi) {
    require_size(m, xi);
    require_finite(xi);
    if (xi.isZero(0.0)) return extend_at_origin(m);

    if (const auto* p = m.poly()) {
        Vector v = eval_polynomial_map(*p, xi);
        if (m.radial_exponent() != 0.0) v *= std::pow(xi.norm(), m.radial_exponent());
        return v;
    }
    Vector v = m.black_box()->eval(xi);
    if (static_cast<std::size_t>(v.size()) != m.n()) {
        throw Error(ErrorKind::InvalidInput, "black-box evaluator returned a vector of the wrong size");
    }
    return v;
}

Matrix eval_jacobian(const MapSpec& m, const Vector& xi) {
    require_size(m, xi);
    require_finite(xi);
    if (xi.isZero(0.0)) throw Error(ErrorKind::UndefinedAtOrigin, "Jacobian is undefined at the origin");

    const auto n = static_cast<Eigen::Index>(m.n());
    if (const auto* p = m.poly()) {
        const auto& d = m.poly_derivatives();
        Matrix J(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) J(i, j) = eval_polynomial(d[static_cast<std::size_t>(i * n + j)], xi);

        const double r = m.radial_exponent();
        if (r != 0.0) {
            // D(|x|^r P) = |x|^r (DP + r P x^T / |x|^2)
            const double norm2 = xi.squaredNorm();
            const Vector P = eval_polynomial_map(*p, xi);
            J += (r / norm2) * P * xi.transpose();
            J *= std::pow(std::sqrt(norm2), r);
        }
        return J;
    }

    const auto* bb = m.black_box();
    Matrix J = bb->jacobian ? bb->jacobian(xi) : central_difference_jacobian(bb->eval, xi);
    if (J.rows() != n || J.cols() != n) {
        throw Error(ErrorKind::InvalidInput, "black-box Jacobian has the wrong shape");
    }
    return J;
}

Vector extend_at_origin(const MapSpec& m) { return Vector::Zero(static_cast<Eigen::Index>(m.n())); }

double polynomial_lipschitz_bound(const PolyMap& p) {
    double L = 0.0;
    for (const auto& comp : p.components)
        for (const auto& t : comp.terms) L += std::abs(t.coeff) * static_cast<double>(p.degree);
    return L;
}

} // namespace hominv
