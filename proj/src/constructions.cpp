#include <ramsey/constructions.hpp>
#include <ramsey/error.hpp>

#include <vector>

using std::int64_t;
using std::vector;

namespace ramsey {

auto rule_name(CompoundRule rule) -> std::string_view
{
    switch (rule) {
    case CompoundRule::product_2017: return "product_2017";
    case CompoundRule::template_2021: return "template_2021";
    case CompoundRule::song_grid: return "song_grid";
    }
    return "unknown";
}

auto product_order(int64_t m, int64_t n) -> int64_t
{
    return ((2 * m - 1) * (2 * n - 1) + 1) / 2;
}

auto template_compound_order(int64_t t, int64_t n, int64_t phi) -> int64_t
{
    return (t - 1) * (n - 1) + 1 + phi;
}

auto product_linear(const LengthColouring & a, const LengthColouring & b) -> LengthColouring
{
    int m = a.order(), n = b.order();
    int period = 2 * m - 1;
    auto order = product_order(m, n);
    if (order > (int64_t{1} << 30))
        throw CapExceeded("product order " + std::to_string(order) + " is too large to build explicitly");

    auto b_colour = [&](int index) {
        if (index < 1 || index > n - 1)
            throw InternalError("product index " + std::to_string(index) + " outside [1, " + std::to_string(n - 1) + "]");
        return a.num_colours() + b.colour(index);
    };

    vector<Colour> colours;
    colours.reserve(static_cast<std::size_t>(order - 1));
    for (int l = 1; l < order; ++l) {
        int q = l / period, r = l % period;
        if (r == 0)
            colours.push_back(b_colour(q));
        else if (r <= m - 1)
            colours.push_back(a.colour(r));
        else
            colours.push_back(b_colour(q + 1));
    }
    return LengthColouring::linear(static_cast<int>(order), a.num_colours() + b.num_colours(), std::move(colours));
}

auto product_cyclic(const LengthColouring & a, const LengthColouring & b) -> LengthColouring
{
    if (! a.is_cyclic() || ! b.is_cyclic())
        throw InvariantError("product_cyclic needs two cyclic colourings");
    auto linear = product_linear(a, b);
    auto cyclic = to_cyclic(linear);
    if (! cyclic)
        throw InternalError("product of cyclic colourings of orders " + std::to_string(a.order()) + " and " + std::to_string(b.order()) + " is not symmetric");
    return *cyclic;
}

auto template_compound(const TemplateGraph & t, const LengthColouring & b) -> LengthColouring
{
    int period = t.order() - 1, n = b.order();
    auto order = template_compound_order(t.order(), n, t.phi());
    if (order > (int64_t{1} << 30))
        throw CapExceeded("compound order " + std::to_string(order) + " is too large to build explicitly");

    int plain = t.plain_colours();
    vector<Colour> colours;
    colours.reserve(static_cast<std::size_t>(order - 1));
    for (int l = 1; l < order; ++l) {
        int r = ((l - 1) % period) + 1;
        if (! t.is_template_length(r))
            colours.push_back(t.base().colour(r));
        else {
            int index = (l + period - 1) / period;
            if (index < 1 || index > n - 1)
                throw InternalError("template slot at length " + std::to_string(l) + " maps to prototype index " + std::to_string(index));
            colours.push_back(plain + b.colour(index));
        }
    }
    return LengthColouring::linear(static_cast<int>(order), plain + b.num_colours(), std::move(colours));
}

auto song_product(const ExplicitColouring & g, const ExplicitColouring & h) -> ExplicitColouring
{
    if (g.num_colours() != h.num_colours())
        throw ArityMismatch("song product needs equal colour counts, got " + std::to_string(g.num_colours()) + " and " + std::to_string(h.num_colours()));
    int a = g.order(), b = h.order();
    ExplicitColouring result{a * b, g.num_colours()};
    for (int x = 0; x < a * b; ++x)
        for (int y = x + 1; y < a * b; ++y) {
            int u = x / b, v = x % b, u2 = y / b, v2 = y % b;
            result.set(x, y, u != u2 ? g.colour(u, u2) : h.colour(v, v2));
        }
    return result;
}

auto song_avoid(const ParameterVector & g_avoid, const ParameterVector & h_avoid) -> ParameterVector
{
    if (g_avoid.size() != h_avoid.size())
        throw ArityMismatch("song product needs parameter vectors of equal length");
    vector<int> result;
    for (std::size_t i = 0; i < g_avoid.size(); ++i)
        result.push_back((g_avoid[i] - 1) * (h_avoid[i] - 1) + 1);
    return ParameterVector{std::move(result)};
}

auto is_prime(int64_t q) -> bool
{
    if (q < 2)
        return false;
    for (int64_t d = 2; d * d <= q; ++d)
        if (q % d == 0)
            return false;
    return true;
}

auto paley_colouring(int q) -> LengthColouring
{
    if (! is_prime(q) || q % 4 != 1)
        throw InvariantError("Paley colouring needs a prime q = 1 (mod 4), got " + std::to_string(q));
    vector<bool> residue(static_cast<std::size_t>(q), false);
    for (int64_t x = 1; x < q; ++x)
        residue[static_cast<std::size_t>((x * x) % q)] = true;
    vector<Colour> colours;
    for (int l = 1; l <= q / 2; ++l)
        colours.push_back(residue[static_cast<std::size_t>(l)] ? 1 : 2);
    return LengthColouring::cyclic(q, 2, std::move(colours));
}

auto single_edge() -> LengthColouring
{
    return LengthColouring::linear(2, 1, {1});
}

auto pentagon() -> LengthColouring
{
    return LengthColouring::cyclic(5, 2, {1, 2});
}

}
