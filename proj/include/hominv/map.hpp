#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace hominv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A single monomial c * x1^e1 * ... * xn^en.
struct Term {
    double coeff = 0.0;
    std::vector<std::uint32_t> exponents;

    std::uint32_t total_degree() const;

    friend bool operator==(const Term&, const Term&) = default;
};

struct Polynomial {
    std::vector<Term> terms;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

/// Homogeneous polynomial vector map P: R^n -> R^n.
///
/// `degree` is the declared common total degree d. Nothing prevents building
/// a PolyMap whose monomials disagree with it; check_homogeneity_symbolic()
/// reports such maps and MapSpec::polynomial() refuses them.
struct PolyMap {
    std::size_t n = 0;
    std::vector<Polynomial> components;
    std::uint32_t degree = 1;

    friend bool operator==(const PolyMap&, const PolyMap&) = default;
};

/// Graded-lexicographic order, leading term first. All monomials of a
/// homogeneous component share a degree, so this reduces to lex order.
bool grlex_greater(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);

/// Merge equal monomials, drop zero coefficients and sort each component.
PolyMap canonicalize(PolyMap p);

Vector eval_polynomial_map(const PolyMap& p, const Vector& x);

/// Opaque evaluator for a map assumed positively homogeneous of `declared_kappa`.
struct BlackBox {
    std::function<Vector(const Vector&)> eval;
    std::function<Matrix(const Vector&)> jacobian; // may be empty
    double declared_kappa = 1.0;
};

/// A positively homogeneous map of order kappa on R^n \ 0.
///
/// Polynomial bodies are evaluated as |x|^(kappa - d) P(x). Instances are
/// immutable and cheap to copy; the symbolic derivative table is shared.
class MapSpec {
public:
    /// Uses kappa = d when `kappa` is not given. Throws Error(InvalidParameter)
    /// when kappa <= 0 or the PolyMap is not homogeneous of its degree.
    static MapSpec polynomial(PolyMap p, std::optional<double> kappa = std::nullopt);
    static MapSpec black_box(std::size_t n, BlackBox body);

    std::size_t n() const { return n_; }
    double kappa() const { return kappa_; }
    double radial_exponent() const { return radial_exponent_; }

    bool is_polynomial() const { return std::holds_alternative<PolyMap>(body_); }
    const PolyMap* poly() const { return std::get_if<PolyMap>(&body_); }
    const BlackBox* black_box() const { return std::get_if<BlackBox>(&body_); }

    /// Symbolic partial derivatives dP_i/dx_j (row-major, n*n polynomials).
    /// Empty for black-box bodies.
    const std::vector<Polynomial>& poly_derivatives() const;

private:
    MapSpec() = default;

    std::size_t n_ = 0;
    double kappa_ = 1.0;
    double radial_exponent_ = 0.0;
    std::variant<PolyMap, BlackBox> body_;
    std::shared_ptr<const std::vector<Polynomial>> derivatives_;
};

/// f(xi). Returns the zero vector at xi = 0 (extension by continuity).
/// Throws Error(InvalidInput) on non-finite components or a size mismatch.
Vector eval_map(const MapSpec& m, const Vector& xi);

/// Df(xi), entries dF_i/dx_j. Polynomial bodies are differentiated
/// symbolically (including the radial weight); black boxes without a
/// Jacobian use central differences with h = eps^(1/3) * max(1, |xi|).
/// Throws Error(UndefinedAtOrigin) at xi = 0.
Matrix eval_jacobian(const MapSpec& m, const Vector& xi);

/// The value assigned at the origin: always 0. Continuity there follows from
/// |f(xi)| <= C |xi|^kappa with C the maximum of |f| on the unit sphere.
Vector extend_at_origin(const MapSpec& m);

/// Lipschitz bound for |P| on the unit sphere: sum over all monomials of
/// |coefficient| * d. Conservative.
double polynomial_lipschitz_bound(const PolyMap& p);

} // namespace hominv
