#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>
#include <string_view>

namespace ramsey {

using BigInt = boost::multiprecision::cpp_int;

/// An exact value (numerator / denominator)^(1/root), kept reduced.
class Radical
{
public:
    Radical() = default;
    Radical(BigInt numerator, BigInt denominator, unsigned root);

    static auto integer_root(BigInt base, unsigned root) -> Radical;
    /// Parses a plain decimal such as "3.280".
    static auto from_decimal(std::string_view text) -> Radical;
    /// Parses "82/25^(1/2)", "234^(1/2)", "82/25" or "976".
    static auto parse(std::string_view text) -> Radical;

    auto numerator() const -> const BigInt & { return _num; }
    auto denominator() const -> const BigInt & { return _den; }
    auto root() const noexcept -> unsigned { return _root; }

    /// x^exponent, exactly.
    auto pow(unsigned exponent) const -> Radical;

    /// Decimal rendering truncated (never rounded up) to `decimals` places,
    /// so the printed value is itself a valid lower bound.
    auto render(unsigned decimals = 6) const -> std::string;
    auto to_double() const -> double;
    /// Canonical text, e.g. "234^(1/2)" or "82/25".
    auto to_string() const -> std::string;

    auto operator<=>(const Radical & other) const -> std::strong_ordering;
    auto operator==(const Radical & other) const -> bool;

private:
    BigInt _num = 0, _den = 1;
    unsigned _root = 1;
};

/// floor(value^(1/root)).
auto integer_nth_root(const BigInt & value, unsigned root) -> BigInt;

}
