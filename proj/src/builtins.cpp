#include "hominv/builtins.hpp"

#include <random>

namespace hominv::builtins {

namespace {

std::vector<std::uint32_t> unit_exponent(std::size_t n, std::size_t j, std::uint32_t e = 1) {
    std::vector<std::uint32_t> v(n, 0);
    v[j] = e;
    return v;
}

PolyMap linear_poly(const Matrix& A) {
    const auto n = static_cast<std::size_t>(A.rows());
    PolyMap p;
    p.n = n;
    p.degree = 1;
    p.components.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double a = A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (a != 0.0) p.components[i].terms.push_back({a, unit_exponent(n, j)});
        }
    return canonicalize(p);
}

/// |x|^2 * (A x), expanded.
PolyMap squared_norm_times_linear(const Matrix& A) {
    const auto n = static_cast<std::size_t>(A.rows());
    PolyMap p;
    p.n = n;
    p.degree = 3;
    p.components.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double a = A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (a == 0.0) continue;
            for (std::size_t k = 0; k < n; ++k) {
                auto e = unit_exponent(n, j);
                e[k] += 2;
                p.components[i].terms.push_back({a, e});
            }
        }
    return canonicalize(p);
}

} // namespace

MapSpec identity(std::size_t n) { return MapSpec::polynomial(linear_poly(Matrix::Identity(n, n))); }

MapSpec radial_cube() { return MapSpec::polynomial(squared_norm_times_linear(Matrix::Identity(3, 3))); }

MapSpec diagonal_linear(const std::vector<double>& d) {
    const Vector v = Eigen::Map<const Vector>(d.data(), static_cast<Eigen::Index>(d.size()));
    return MapSpec::polynomial(linear_poly(v.asDiagonal()));
}

MapSpec radial_linear(const std::vector<double>& d, double kappa) {
    const Vector v = Eigen::Map<const Vector>(d.data(), static_cast<Eigen::Index>(d.size()));
    return MapSpec::polynomial(linear_poly(v.asDiagonal()), kappa);
}

MapSpec complex_square() {
    PolyMap p;
    p.n = 2;
    p.degree = 2;
    p.components.resize(2);
    p.components[0].terms = {{1.0, {2, 0}}, {-1.0, {0, 2}}};
    p.components[1].terms = {{2.0, {1, 1}}};
    return MapSpec::polynomial(canonicalize(p));
}

MapSpec axis_cube() {
    PolyMap p;
    p.n = 3;
    p.degree = 3;
    p.components.resize(3);
    for (std::size_t i = 0; i < 3; ++i) p.components[i].terms = {{1.0, unit_exponent(3, i, 3)}};
    return MapSpec::polynomial(p);
}

MapSpec reflection() {
    Matrix A = Matrix::Identity(3, 3);
    A(0, 0) = -1.0;
    return MapSpec::polynomial(linear_poly(A));
}

MapSpec triangular_cubic() {
    PolyMap p;
    p.n = 3;
    p.degree = 3;
    p.components.resize(3);
    p.components[0].terms = {{1.0, {3, 0, 0}}, {1.0, {1, 2, 0}}};
    p.components[1].terms = {{1.0, {0, 3, 0}}, {1.0, {0, 1, 2}}};
    p.components[2].terms = {{1.0, {0, 0, 3}}};
    return MapSpec::polynomial(canonicalize(p));
}

MapSpec shifted_radial_cube(const Vector& offset) {
    BlackBox bb;
    bb.declared_kappa = 3.0;
    bb.eval = [offset](const Vector& x) -> Vector { return x.squaredNorm() * x + offset; };
    return MapSpec::black_box(static_cast<std::size_t>(offset.size()), std::move(bb));
}

MapSpec random_admissible(std::size_t n, double kappa, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    Matrix A = 2.0 * Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j) A(i, j) += 0.3 * unit(rng);

    PolyMap p = squared_norm_times_linear(A);
    constexpr double eps = 0.02;
    constexpr int perturbation_terms = 3;
    std::uniform_int_distribution<std::size_t> var(0, n - 1);
    for (auto& comp : p.components) {
        for (int k = 0; k < perturbation_terms; ++k) {
            std::vector<std::uint32_t> e(n, 0);
            for (int f = 0; f < 3; ++f) ++e[var(rng)];
            comp.terms.push_back({eps * unit(rng), e});
        }
    }
    return MapSpec::polynomial(canonicalize(p), kappa);
}

} // namespace hominv::builtins
