#pragma once

#include "hominv/error.hpp"
#include "hominv/map.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hominv {

enum class ParseErrorKind { Syntax, MixedDegree, DimensionMismatch, BadKappa };

/// Parse failure annotated with a 1-based line and column.
class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, const std::string& message);

    ParseErrorKind parse_kind() const noexcept { return parse_kind_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    ParseErrorKind parse_kind_;
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

/// Parse a map definition:
///
///     kappa = 2.5;               (optional)
///     n = 2;
///     f1 = x1^2 - x2^2;
///     f2 = 2*x1*x2
///
/// Coefficients may be decimal or rational (3/4). The result is
/// canonicalized; kappa defaults to the polynomial degree.
MapSpec parse_map(std::string_view text);

/// Canonical text for `p`; emits a kappa header when `kappa` differs from the degree.
std::string format_map(const PolyMap& p, std::optional<double> kappa = std::nullopt);
/// Throws Error(InvalidInput) for black-box maps.
std::string format_map(const MapSpec& m);

/// Formats the monomial part of `exponents`, e.g. "x1^2*x3", or "1" for a constant.
std::string format_monomial(const std::vector<std::uint32_t>& exponents);

struct HomogeneityVerdict {
    struct Offender {
        std::size_t component = 0;
        std::vector<std::uint32_t> exponents;
        std::uint32_t degree = 0;
    };

    bool homogeneous = true;
    std::uint32_t degree = 0;
    std::vector<Offender> offenders;
};

/// Exact check that every nonzero monomial has total degree p.degree.
HomogeneityVerdict check_homogeneity_symbolic(const PolyMap& p);

} // namespace hominv
