#include "hominv/builtins.hpp"
#include "hominv/hypotheses.hpp"
#include "hominv/parser.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace hominv;

namespace {

ParseError parse_error(std::string_view text) {
    try {
        parse_map(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a parse error for: " << text);
    throw;
}

/// Term multiset, independent of ordering.
std::vector<std::pair<std::vector<std::uint32_t>, double>> term_multiset(const Polynomial& p) {
    std::vector<std::pair<std::vector<std::uint32_t>, double>> v;
    for (const auto& t : p.terms) v.emplace_back(t.exponents, t.coeff);
    std::sort(v.begin(), v.end());
    return v;
}

bool same_terms(const PolyMap& a, const PolyMap& b) {
    if (a.n != b.n || a.components.size() != b.components.size()) return false;
    for (std::size_t i = 0; i < a.components.size(); ++i)
        if (term_multiset(a.components[i]) != term_multiset(b.components[i])) return false;
    return true;
}

} // namespace

TEST_CASE("parse_map examples") {
    const auto sq = parse_map("n=2; f1 = x1^2 - x2^2; f2 = 2*x1*x2");
    REQUIRE(sq.poly());
    CHECK(sq.poly()->degree == 2);
    CHECK(sq.kappa() == 2.0);
    CHECK(*sq.poly() == *builtins::complex_square().poly());

    const auto id = parse_map("n=3; f1 = x1; f2 = x2; f3 = x3");
    CHECK(id.poly()->degree == 1);
    CHECK(*id.poly() == *builtins::identity(3).poly());

    const auto e = parse_error("n=2; f1 = x1^2 + x2; f2 = x1*x2");
    CHECK(e.parse_kind() == ParseErrorKind::MixedDegree);
    CHECK(e.message().find("'x2'") != std::string::npos);
    CHECK(e.message().find("f1") != std::string::npos);
    CHECK(e.line() == 1);
    CHECK(e.column() == 18);
}

TEST_CASE("grammar details") {
    // implicit multiplication, rational coefficients, repeated variables, leading sign, newlines
    const auto m = parse_map("kappa = 2.5;\nn = 2;\nf1 = -3/4 x1 x1 + 2x2^2;\nf2 = x1*x2 - .5e1*x2*x1;");
    const auto& p = *m.poly();
    CHECK(m.kappa() == 2.5);
    CHECK(m.radial_exponent() == doctest::Approx(0.5));
    REQUIRE(p.components[0].terms.size() == 2);
    CHECK(p.components[0].terms[0].coeff == -0.75);
    CHECK(p.components[0].terms[0].exponents == std::vector<std::uint32_t>{2, 0});
    CHECK(p.components[0].terms[1].coeff == 2.0);
    REQUIRE(p.components[1].terms.size() == 1);
    CHECK(p.components[1].terms[0].coeff == -4.0);

    // terms that cancel vanish; zero components are allowed at parse time
    const auto z = parse_map("n=2; f1 = x1 - x1 + x2; f2 = 0");
    CHECK(z.poly()->components[0].terms.size() == 1);
    CHECK(z.poly()->components[1].terms.empty());
}

TEST_CASE("parse errors carry kind and position") {
    auto e = parse_error("n=3; f1 = x1; f2 = x2");
    CHECK(e.parse_kind() == ParseErrorKind::DimensionMismatch);

    e = parse_error("n=1; f1 = x1; f2 = x1");
    CHECK(e.parse_kind() == ParseErrorKind::DimensionMismatch);
    CHECK(e.column() == 15);

    e = parse_error("kappa=0; n=1; f1 = x1");
    CHECK(e.parse_kind() == ParseErrorKind::BadKappa);
    e = parse_error("kappa=-2; n=1; f1 = x1");
    CHECK(e.parse_kind() == ParseErrorKind::BadKappa);

    e = parse_error("n=2;\nf1 = x1 + + x2;\nf2 = x2");
    CHECK(e.parse_kind() == ParseErrorKind::Syntax);
    CHECK(e.line() == 2);
    CHECK(e.column() == 11);

    e = parse_error("n=2; f1 = x3; f2 = x1");
    CHECK(e.message().find("unknown variable 'x3'") != std::string::npos);
    e = parse_error("n=2; f2 = x1; f1 = x2");
    CHECK(e.message().find("expected component name f1") != std::string::npos);
    e = parse_error("n=1; f1 = x1/0");
    CHECK(e.parse_kind() == ParseErrorKind::Syntax);
    e = parse_error("n=1; f1 = 1/0 x1");
    CHECK(e.message().find("division by zero") != std::string::npos);
    e = parse_error("n=1; f1 = 1e999*x1");
    CHECK(e.message().find("not representable") != std::string::npos);
    e = parse_error("n=1; f1 = x1^99999999999999999999");
    CHECK(e.parse_kind() == ParseErrorKind::Syntax);
    e = parse_error("n=1; f1 = 3");
    CHECK(e.parse_kind() == ParseErrorKind::MixedDegree);
    e = parse_error("");
    CHECK(e.line() == 1);
    CHECK(e.column() == 1);
    CHECK(std::string(e.what()).rfind("line 1, column 1:", 0) == 0);
}

TEST_CASE("check_homogeneity_symbolic examples") {
    auto v = check_homogeneity_symbolic(*builtins::complex_square().poly());
    CHECK(v.homogeneous);
    CHECK(v.degree == 2);
    v = check_homogeneity_symbolic(*builtins::identity(3).poly());
    CHECK(v.homogeneous);
    CHECK(v.degree == 1);

    PolyMap p;
    p.n = 2;
    p.degree = 2;
    p.components = {Polynomial{{{1.0, {2, 0}}, {1.0, {0, 1}}}}, Polynomial{{{1.0, {1, 1}}}}};
    v = check_homogeneity_symbolic(p);
    CHECK_FALSE(v.homogeneous);
    REQUIRE(v.offenders.size() == 1);
    CHECK(v.offenders[0].component == 0);
    CHECK(v.offenders[0].exponents == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("format_map examples round-trip") {
    for (const auto& m : {builtins::identity(3), builtins::complex_square(), builtins::radial_linear({1, 2, 3}, 2.0)}) {
        const auto text = format_map(m);
        const auto back = parse_map(text);
        CHECK(*back.poly() == *m.poly());
        CHECK(back.kappa() == m.kappa());
        CHECK(format_map(back) == text);
    }
    CHECK(format_map(builtins::complex_square()) == "n=2;\nf1 = x1^2 - x2^2;\nf2 = 2*x1*x2\n");
    CHECK(format_map(builtins::radial_linear({1, 2, 3}, 2.0)) == "kappa=2;\nn=3;\nf1 = x1;\nf2 = 2*x2;\nf3 = 3*x3\n");

    std::mt19937_64 rng(3);
    const auto p = canonicalize(oracle::random_poly_map(rng, 4, 3, 6));
    CHECK(same_terms(*parse_map(format_map(p)).poly(), p));
}

TEST_CASE("parse/format round-trip on 200 random maps") {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<std::size_t> dim(1, 5);
    std::uniform_int_distribution<std::uint32_t> deg(1, 4);
    std::uniform_int_distribution<int> terms(1, 8);
    std::uniform_real_distribution<double> kap(0.1, 6.0);
    for (int k = 0; k < 200; ++k) {
        const auto p = canonicalize(oracle::random_poly_map(rng, dim(rng), deg(rng), terms(rng)));
        const double kappa = (k % 2) ? kap(rng) : static_cast<double>(p.degree);
        const auto text = format_map(p, kappa);
        const auto back = parse_map(text);
        CHECK(same_terms(*back.poly(), p));
        CHECK(back.kappa() == kappa);
    }
}

TEST_CASE("symbolic verdict agrees with the sampled homogeneity residual") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::size_t> dim(1, 4);
    std::uniform_int_distribution<std::uint32_t> deg(1, 3);
    for (int k = 0; k < 100; ++k) {
        auto p = oracle::random_poly_map(rng, dim(rng), deg(rng), 4);
        const bool make_mixed = k % 2 == 1;
        if (make_mixed) {
            std::vector<std::uint32_t> e(p.n, 0);
            e[0] = p.degree + 1;
            p.components[0].terms.push_back({1.5, e});
        }
        p = canonicalize(p);
        const bool symbolic = check_homogeneity_symbolic(p).homogeneous;
        CHECK(symbolic == !make_mixed);

        BlackBox bb;
        bb.declared_kappa = p.degree;
        bb.eval = [p](const Vector& x) { return eval_polynomial_map(p, x); };
        const double residual = homogeneity_residual(MapSpec::black_box(p.n, bb), 42);
        CHECK((residual <= kHomogeneityTolerance) == symbolic);
    }
}

TEST_CASE("fuzzed inputs yield a parse or a position-annotated error") {
    std::mt19937_64 rng(1234);
    const std::vector<std::string> corpus = {
        format_map(builtins::radial_cube()),
        format_map(builtins::complex_square()),
        format_map(builtins::radial_linear({1, 2, 3}, 2.0)),
        "kappa=1.5; n=2; f1 = 3/4*x1^2 - x2^2; f2 = 2 x1 x2",
    };
    int parsed = 0, rejected = 0;
    for (int k = 0; k < 10000; ++k) {
        const auto text = oracle::mutate(corpus[static_cast<std::size_t>(k) % corpus.size()], rng);
        try {
            const auto m = parse_map(text);
            CHECK(check_homogeneity_symbolic(*m.poly()).homogeneous);
            ++parsed;
        } catch (const ParseError& e) {
            CHECK(e.line() >= 1);
            CHECK(e.column() >= 1);
            ++rejected;
        }
    }
    CHECK(parsed + rejected == 10000);
    CHECK(parsed > 0);
    CHECK(rejected > 0);
}
