#include "hominv/parser.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace hominv {

namespace {

constexpr std::size_t kMaxDimension = 1024;
constexpr std::uint32_t kMaxExponent = 1024;

std::string located(std::size_t line, std::size_t column, const std::string& message) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

enum class Tok { Ident, Number, Plus, Minus, Star, Caret, Slash, Equals, Semi, End };

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    std::size_t line = 1;
    std::size_t column = 1;
};

const char* describe(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Caret: return "'^'";
    case Tok::Slash: return "'/'";
    case Tok::Equals: return "'='";
    case Tok::Semi: return "';'";
    case Tok::End: return "end of input";
    }
    return "token";
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space();
        Token t;
        t.line = line_;
        t.column = column_;
        if (pos_ >= src_.size()) return t;

        const std::size_t start = pos_;
        const char c = src_[pos_];
        if (is_alpha(c)) {
            while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) advance();
            t.kind = Tok::Ident;
        } else if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
            while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
            if (pos_ < src_.size() && src_[pos_] == '.') {
                advance();
                while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                std::size_t look = pos_ + 1;
                if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
                if (look < src_.size() && is_digit(src_[look])) {
                    while (pos_ < look) advance();
                    while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
                }
            }
            t.kind = Tok::Number;
        } else {
            switch (c) {
            case '+': t.kind = Tok::Plus; break;
            case '-': t.kind = Tok::Minus; break;
            case '*': t.kind = Tok::Star; break;
            case '^': t.kind = Tok::Caret; break;
            case '/': t.kind = Tok::Slash; break;
            case '=': t.kind = Tok::Equals; break;
            case ';': t.kind = Tok::Semi; break;
            default: {
                std::string shown = (static_cast<unsigned char>(c) >= 0x20 && static_cast<unsigned char>(c) < 0x7f)
                                        ? std::string(1, c)
                                        : "\\x" + to_hex(static_cast<unsigned char>(c));
                throw ParseError(ParseErrorKind::Syntax, line_, column_, "unexpected character '" + shown + "'");
            }
            }
            advance();
        }
        t.text = src_.substr(start, pos_ - start);
        return t;
    }

private:
    static std::string to_hex(unsigned char c) {
        static const char* digits = "0123456789abcdef";
        return {digits[c >> 4], digits[c & 15]};
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

struct SourceTerm {
    Term term;
    std::size_t component = 0;
    std::size_t line = 0;
    std::size_t column = 0;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

    MapSpec run() {
        std::optional<double> kappa;
        if (cur_.kind == Tok::Ident && cur_.text == "kappa") {
            kappa = parse_kappa_header();
            expect(Tok::Semi);
        }
        const Token dim_tok = cur_;
        if (!(cur_.kind == Tok::Ident && cur_.text == "n")) fail(cur_, "expected 'n = <dimension>'");
        shift();
        expect(Tok::Equals);
        n_ = parse_dimension();

        std::vector<Polynomial> components;
        std::size_t count = 0;
        while (cur_.kind == Tok::Semi) {
            shift();
            if (cur_.kind == Tok::End) break; // trailing semicolon
            parse_component(count + 1);
            ++count;
        }
        if (cur_.kind != Tok::End) fail(cur_, std::string("expected ';' or end of input, found ") + describe(cur_.kind));
        if (count != n_) {
            throw ParseError(ParseErrorKind::DimensionMismatch, dim_tok.line, dim_tok.column,
                             "declared n=" + std::to_string(n_) + " but found " + std::to_string(count) +
                                 " component(s)");
        }

        PolyMap p;
        p.n = n_;
        p.components.resize(n_);
        p.degree = 1;
        bool have_degree = false;
        for (const auto& st : terms_) {
            if (st.term.coeff == 0.0) continue;
            const auto deg = st.term.total_degree();
            if (!have_degree) {
                p.degree = deg;
                have_degree = true;
                if (deg == 0) {
                    throw ParseError(ParseErrorKind::MixedDegree, st.line, st.column,
                                     "constant monomial in f" + std::to_string(st.component + 1) +
                                         "; components must be homogeneous of degree >= 1");
                }
            } else if (deg != p.degree) {
                throw ParseError(ParseErrorKind::MixedDegree, st.line, st.column,
                                 "mixed degree: monomial '" + format_monomial(st.term.exponents) + "' in f" +
                                     std::to_string(st.component + 1) + " has degree " + std::to_string(deg) +
                                     ", expected " + std::to_string(p.degree));
            }
            p.components[st.component].terms.push_back(st.term);
        }
        return MapSpec::polynomial(canonicalize(std::move(p)), kappa);
    }

private:
    [[noreturn]] void fail(const Token& at, const std::string& msg) {
        throw ParseError(ParseErrorKind::Syntax, at.line, at.column, msg);
    }

    void shift() { cur_ = lex_.next(); }

    Token expect(Tok kind) {
        if (cur_.kind != kind) {
            fail(cur_, std::string("expected ") + describe(kind) + ", found " + describe(cur_.kind));
        }
        Token t = cur_;
        shift();
        return t;
    }

    double number_value(const Token& t) {
        double v = 0.0;
        const auto* first = t.text.data();
        const auto* last = first + t.text.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
            fail(t, "number '" + std::string(t.text) + "' is not representable");
        }
        return v;
    }

    std::uint64_t integer_value(const Token& t, const char* what) {
        if (t.kind != Tok::Number) fail(t, std::string("expected ") + what);
        std::uint64_t v = 0;
        const auto* first = t.text.data();
        const auto* last = first + t.text.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) fail(t, std::string("expected ") + what + ", found '" + std::string(t.text) + "'");
        return v;
    }

    double parse_kappa_header() {
        shift();
        expect(Tok::Equals);
        bool negative = false;
        if (cur_.kind == Tok::Minus || cur_.kind == Tok::Plus) {
            negative = cur_.kind == Tok::Minus;
            shift();
        }
        const Token num = cur_;
        if (num.kind != Tok::Number) fail(num, "expected a real value for kappa");
        double k = number_value(num);
        shift();
        if (negative) k = -k;
        if (!(k > 0.0)) {
            throw ParseError(ParseErrorKind::BadKappa, num.line, num.column,
                             "kappa must be positive, got " + std::string(negative ? "-" : "") + std::string(num.text));
        }
        return k;
    }

    std::size_t parse_dimension() {
        const Token t = cur_;
        const auto v = integer_value(t, "an integer dimension");
        if (v < 1 || v > kMaxDimension) fail(t, "dimension must be between 1 and " + std::to_string(kMaxDimension));
        shift();
        return static_cast<std::size_t>(v);
    }

    void parse_component(std::size_t index) {
        const Token name = cur_;
        if (name.kind != Tok::Ident) fail(name, "expected component name f" + std::to_string(index));
        if (index > n_) {
            throw ParseError(ParseErrorKind::DimensionMismatch, name.line, name.column,
                             "more components than declared n=" + std::to_string(n_));
        }
        if (name.text != "f" + std::to_string(index)) {
            fail(name, "expected component name f" + std::to_string(index) + ", found '" + std::string(name.text) + "'");
        }
        shift();
        expect(Tok::Equals);

        double sign = 1.0;
        if (cur_.kind == Tok::Minus || cur_.kind == Tok::Plus) {
            sign = cur_.kind == Tok::Minus ? -1.0 : 1.0;
            shift();
        }
        parse_term(index - 1, sign);
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            sign = cur_.kind == Tok::Minus ? -1.0 : 1.0;
            shift();
            parse_term(index - 1, sign);
        }
    }

    void parse_term(std::size_t component, double sign) {
        SourceTerm st;
        st.component = component;
        st.line = cur_.line;
        st.column = cur_.column;
        st.term.coeff = sign;
        st.term.exponents.assign(n_, 0);

        bool have_any = false;
        if (cur_.kind == Tok::Number) {
            const Token num = cur_;
            double c = number_value(num);
            shift();
            if (cur_.kind == Tok::Slash) {
                shift();
                const Token den = cur_;
                if (den.kind != Tok::Number) fail(den, "expected denominator");
                const double d = number_value(den);
                if (d == 0.0) fail(den, "division by zero in coefficient");
                shift();
                c /= d;
                if (!std::isfinite(c)) fail(num, "coefficient is not representable");
            }
            st.term.coeff *= c;
            have_any = true;
        }
        while (true) {
            if (cur_.kind == Tok::Star) {
                shift();
                if (cur_.kind != Tok::Ident) fail(cur_, std::string("expected variable after '*', found ") + describe(cur_.kind));
            } else if (cur_.kind != Tok::Ident) {
                break;
            }
            parse_factor(st.term.exponents);
            have_any = true;
        }
        if (!have_any) fail(cur_, std::string("expected a term, found ") + describe(cur_.kind));
        terms_.push_back(std::move(st));
    }

    void parse_factor(std::vector<std::uint32_t>& exponents) {
        const Token var = cur_;
        std::size_t index = 0;
        bool ok = var.text.size() >= 2 && var.text[0] == 'x' && var.text[1] != '0';
        if (ok) {
            const auto* first = var.text.data() + 1;
            const auto* last = var.text.data() + var.text.size();
            auto [ptr, ec] = std::from_chars(first, last, index);
            ok = ec == std::errc() && ptr == last && index >= 1 && index <= n_;
        }
        if (!ok) fail(var, "unknown variable '" + std::string(var.text) + "' (expected x1..x" + std::to_string(n_) + ")");
        shift();

        std::uint64_t e = 1;
        if (cur_.kind == Tok::Caret) {
            shift();
            const Token et = cur_;
            e = integer_value(et, "an integer exponent");
            if (e > kMaxExponent) fail(et, "exponent exceeds " + std::to_string(kMaxExponent));
            shift();
        }
        auto& slot = exponents[index - 1];
        if (slot + e > kMaxExponent) fail(var, "exponent exceeds " + std::to_string(kMaxExponent));
        slot += static_cast<std::uint32_t>(e);
    }

    Lexer lex_;
    Token cur_;
    std::size_t n_ = 0;
    std::vector<SourceTerm> terms_;
};

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

ParseError::ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, const std::string& message)
    : Error(ErrorKind::Parse, located(line, column, message)),
      parse_kind_(kind),
      line_(line),
      column_(column),
      message_(message) {}

MapSpec parse_map(std::string_view text) { return Parser(text).run(); }

std::string format_monomial(const std::vector<std::uint32_t>& exponents) {
    std::string out;
    for (std::size_t j = 0; j < exponents.size(); ++j) {
        if (exponents[j] == 0) continue;
        if (!out.empty()) out += '*';
        out += 'x' + std::to_string(j + 1);
        if (exponents[j] > 1) out += '^' + std::to_string(exponents[j]);
    }
    return out.empty() ? "1" : out;
}

std::string format_map(const PolyMap& p, std::optional<double> kappa) {
    const PolyMap canon = canonicalize(p);
    std::ostringstream os;
    if (kappa && *kappa != static_cast<double>(canon.degree)) os << "kappa=" << format_real(*kappa) << ";\n";
    os << "n=" << canon.n << ";";
    for (std::size_t i = 0; i < canon.components.size(); ++i) {
        os << "\nf" << (i + 1) << " =";
        const auto& terms = canon.components[i].terms;
        if (terms.empty()) os << " 0";
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const auto& t = terms[k];
            const bool neg = std::signbit(t.coeff);
            if (k == 0) {
                os << (neg ? " -" : " ");
            } else {
                os << (neg ? " - " : " + ");
            }
            const double mag = std::abs(t.coeff);
            const bool constant = t.total_degree() == 0;
            if (constant) {
                os << format_real(mag);
            } else {
                if (mag != 1.0) os << format_real(mag) << '*';
                os << format_monomial(t.exponents);
            }
        }
        if (i + 1 < canon.components.size()) os << ';';
    }
    os << '\n';
    return os.str();
}

std::string format_map(const MapSpec& m) {
    const auto* p = m.poly();
    if (!p) throw Error(ErrorKind::InvalidInput, "black-box maps have no textual form");
    return format_map(*p, m.kappa());
}

HomogeneityVerdict check_homogeneity_symbolic(const PolyMap& p) {
    HomogeneityVerdict v;
    v.degree = p.degree;
    for (std::size_t i = 0; i < p.components.size(); ++i) {
        for (const auto& t : p.components[i].terms) {
            if (t.coeff == 0.0) continue;
            const auto d = t.total_degree();
            if (d != p.degree) v.offenders.push_back({i, t.exponents, d});
        }
    }
    v.homogeneous = v.offenders.empty();
    return v;
}

} // namespace hominv
