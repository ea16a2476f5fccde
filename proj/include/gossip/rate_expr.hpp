#pragma once

#include <string>
#include <string_view>

namespace gossip {

// A scaling expression in the node count n:
//
//   expr  := coeff | [coeff '*'] base
//   base  := 'n' | 'sqrt(n)' | 'cbrt(n)' | 'log(n)' | 'n^' rational
//   rational := number | number '/' number | '(' number ['/' number] ')'
//
// log is the natural logarithm.
class RateExpr {
public:
    enum class Base { Constant, Linear, Sqrt, Cbrt, Log, Power };

    static RateExpr constant(double value);
    static RateExpr parse(std::string_view text);

    double evaluate(double n) const;
    double coefficient() const noexcept { return coeff_; }
    Base base() const noexcept { return base_; }
    double exponent() const noexcept { return exponent_; }
    const std::string& text() const noexcept { return text_; }

private:
    double coeff_ = 1.0;
    Base base_ = Base::Constant;
    double exponent_ = 0.0;  // Power only
    std::string text_;
};

inline RateExpr parse_rate_expr(std::string_view text) { return RateExpr::parse(text); }

}  // namespace gossip
