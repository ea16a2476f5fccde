#include "gossip/rate_expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "gossip/errors.hpp"

namespace gossip {

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool done() {
        skip_space();
        return pos_ >= text_.size();
    }
    bool accept(std::string_view token) {
        skip_space();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }
    bool at_digit() {
        skip_space();
        return pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.');
    }
    double number() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            ++pos_;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (start == pos_ || ec != std::errc() || ptr != text_.data() + pos_) {
            pos_ = start;
            fail("expected a number");
        }
        return value;
    }
    void expect(std::string_view token) {
        if (!accept(token)) fail("expected '" + std::string(token) + "'");
    }

    [[noreturn]] void fail(const std::string& what) {
        skip_space();
        std::size_t end = pos_;
        while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
            ++end;
        }
        if (end == pos_ && end < text_.size()) ++end;
        const std::string token = pos_ < text_.size() ? std::string(text_.substr(pos_, end - pos_)) : "<end>";
        throw ConfigError("rate expression '" + std::string(text_) + "': " + what + ", found '" + token +
                          "' at position " + std::to_string(pos_));
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

double parse_rational(Cursor& cur) {
    const bool paren = cur.accept("(");
    const bool negative = cur.accept("-");
    const double num = negative ? -cur.number() : cur.number();
    double den = 1.0;
    if (cur.accept("/")) {
        den = cur.number();
        if (den == 0.0) cur.fail("zero denominator in exponent");
    }
    if (paren) cur.expect(")");
    return num / den;
}

}  // namespace

RateExpr RateExpr::constant(double value) {
    if (!(value > 0) || !std::isfinite(value)) throw ConfigError("rate constant must be positive and finite");
    RateExpr e;
    e.coeff_ = value;
    e.base_ = Base::Constant;
    e.text_ = std::to_string(value);
    return e;
}

RateExpr RateExpr::parse(std::string_view text) {
    Cursor cur(text);
    RateExpr e;
    e.text_ = std::string(text);

    if (cur.at_digit()) {
        e.coeff_ = cur.number();
        if (!(e.coeff_ > 0)) throw ConfigError("rate expression '" + e.text_ + "': coefficient must be positive");
        if (cur.done()) {
            e.base_ = Base::Constant;
            return e;
        }
        cur.expect("*");
    }

    if (cur.accept("sqrt(")) {
        cur.expect("n");
        cur.expect(")");
        e.base_ = Base::Sqrt;
    } else if (cur.accept("cbrt(")) {
        cur.expect("n");
        cur.expect(")");
        e.base_ = Base::Cbrt;
    } else if (cur.accept("log(")) {
        cur.expect("n");
        cur.expect(")");
        e.base_ = Base::Log;
    } else if (cur.accept("n")) {
        if (cur.accept("^")) {
            e.base_ = Base::Power;
            e.exponent_ = parse_rational(cur);
        } else {
            e.base_ = Base::Linear;
        }
    } else {
        cur.fail("expected 'n', 'sqrt(n)', 'cbrt(n)', 'log(n)' or 'n^p'");
    }
    if (!cur.done()) cur.fail("unexpected trailing input");
    return e;
}

double RateExpr::evaluate(double n) const {
    double base = 1.0;
    switch (base_) {
        case Base::Constant: base = 1.0; break;
        case Base::Linear: base = n; break;
        case Base::Sqrt: base = std::sqrt(n); break;
        case Base::Cbrt: base = std::cbrt(n); break;
        case Base::Log: base = std::log(n); break;
        case Base::Power: base = std::pow(n, exponent_); break;
    }
    const double value = coeff_ * base;
    if (!(value > 0) || !std::isfinite(value)) {
        throw ConfigError("rate expression '" + text_ + "' is not positive at n=" + std::to_string(n));
    }
    return value;
}

}  // namespace gossip
