#include <ramsey/error.hpp>
#include <ramsey/radical.hpp>

#include <boost/integer/common_factor_rt.hpp>

#include <cmath>

using std::string;
using std::string_view;

namespace ramsey {

namespace
{
    auto power(const BigInt & base, unsigned exponent) -> BigInt
    {
        return boost::multiprecision::pow(base, exponent);
    }

    auto parse_integer(string_view text, string_view what) -> BigInt
    {
        if (text.empty() || text.find_first_not_of("0123456789") != string_view::npos)
            throw ParseError(string(what), "expected digits, got '" + string(text) + "'");
        return BigInt{string(text)};
    }
}

auto integer_nth_root(const BigInt & value, unsigned root) -> BigInt
{
    if (value < 0)
        throw InvariantError("root of a negative value");
    if (root == 1 || value < 2)
        return value;
    BigInt low = 0, high = 1;
    while (power(high, root) <= value)
        high *= 2;
    while (high - low > 1) {
        BigInt mid = (low + high) / 2;
        if (power(mid, root) <= value)
            low = mid;
        else
            high = mid;
    }
    return low;
}

Radical::Radical(BigInt numerator, BigInt denominator, unsigned root) :
    _num(std::move(numerator)),
    _den(std::move(denominator)),
    _root(root)
{
    if (_root == 0)
        throw InvariantError("radical root must be positive");
    if (_den <= 0 || _num < 0)
        throw InvariantError("radical base must be a non-negative fraction");
    BigInt g = boost::integer::gcd(_num, _den);
    if (g > 1) {
        _num /= g;
        _den /= g;
    }
    // Reduce (n/d)^(1/r) to (n'/d')^(1/r') when the base is a perfect power.
    for (unsigned k = _root; k > 1; --k) {
        if (_root % k != 0)
            continue;
        BigInt n = integer_nth_root(_num, k), d = integer_nth_root(_den, k);
        if (power(n, k) == _num && power(d, k) == _den) {
            _num = n;
            _den = d;
            _root /= k;
            break;
        }
    }
}

auto Radical::integer_root(BigInt base, unsigned root) -> Radical
{
    return Radical{std::move(base), 1, root};
}

auto Radical::from_decimal(string_view text) -> Radical
{
    auto dot = text.find('.');
    if (dot == string_view::npos)
        return Radical{parse_integer(text, "decimal"), 1, 1};
    auto whole = text.substr(0, dot), fraction = text.substr(dot + 1);
    BigInt scale = power(BigInt{10}, static_cast<unsigned>(fraction.size()));
    BigInt value = parse_integer(whole.empty() ? "0" : whole, "decimal") * scale + (fraction.empty() ? BigInt{0} : parse_integer(fraction, "decimal"));
    return Radical{value, scale, 1};
}

auto Radical::parse(string_view text) -> Radical
{
    unsigned root = 1;
    auto caret = text.find("^(1/");
    if (caret != string_view::npos) {
        auto tail = text.substr(caret + 4);
        if (tail.empty() || tail.back() != ')')
            throw ParseError("radical", "malformed root in '" + string(text) + "'");
        root = parse_integer(tail.substr(0, tail.size() - 1), "radical").convert_to<unsigned>();
        text = text.substr(0, caret);
    }
    auto slash = text.find('/');
    if (slash == string_view::npos)
        return Radical{parse_integer(text, "radical"), 1, root};
    return Radical{parse_integer(text.substr(0, slash), "radical"), parse_integer(text.substr(slash + 1), "radical"), root};
}

auto Radical::pow(unsigned exponent) const -> Radical
{
    return Radical{power(_num, exponent), power(_den, exponent), _root};
}

auto Radical::render(unsigned decimals) const -> string
{
    BigInt scale = power(BigInt{10}, decimals * _root);
    BigInt scaled = integer_nth_root(_num * scale / _den, _root);
    auto digits = scaled.convert_to<string>();
    if (decimals == 0)
        return digits;
    if (digits.size() <= decimals)
        digits.insert(0, decimals + 1 - digits.size(), '0');
    digits.insert(digits.size() - decimals, 1, '.');
    return digits;
}

auto Radical::to_double() const -> double
{
    return std::pow(_num.convert_to<double>() / _den.convert_to<double>(), 1.0 / _root);
}

auto Radical::to_string() const -> string
{
    string base = _num.convert_to<string>();
    if (_den != 1)
        base += "/" + _den.convert_to<string>();
    if (_root != 1)
        base += "^(1/" + std::to_string(_root) + ")";
    return base;
}

auto Radical::operator<=>(const Radical & other) const -> std::strong_ordering
{
    BigInt left = power(_num, other._root) * power(other._den, _root);
    BigInt right = power(other._num, _root) * power(_den, other._root);
    if (left < right)
        return std::strong_ordering::less;
    if (left > right)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

auto Radical::operator==(const Radical & other) const -> bool
{
    return (*this <=> other) == std::strong_ordering::equal;
}

}
