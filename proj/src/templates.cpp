#include <ramsey/constructions.hpp>
#include <ramsey/error.hpp>
#include <ramsey/templates.hpp>

#include <algorithm>
#include <future>

using std::optional;
using std::vector;

namespace ramsey {

TemplateGraph::TemplateGraph(LengthColouring base) :
    _base(base.to_linear())
{
    Colour s = _base.num_colours();
    if (! is_tf_template(_base, s))
        throw InvariantError("colour " + std::to_string(s) + " is not a triangle-free template class containing length " + std::to_string(_base.order() - 1));
    _phi = ramsey::phi(_base, s);
}

auto is_sum_free(const vector<int> & lengths) -> bool
{
    if (lengths.empty())
        return true;
    int top = *std::max_element(lengths.begin(), lengths.end());
    vector<bool> member(static_cast<std::size_t>(top) + 1, false);
    for (int l : lengths)
        member[static_cast<std::size_t>(l)] = true;
    for (std::size_t a = 0; a < lengths.size(); ++a)
        for (std::size_t b = a; b < lengths.size(); ++b) {
            int sum = lengths[a] + lengths[b];
            if (sum <= top && member[static_cast<std::size_t>(sum)])
                return false;
        }
    return true;
}

// Vertices a < b < c span lengths b-a, c-b and their sum, so a length
// class is triangle-free exactly when it is sum-free.
auto is_tf_template(const LengthColouring & c, Colour s) -> bool
{
    auto linear = c.to_linear();
    auto lengths = linear.colour_class(s);
    if (lengths.empty() || lengths.back() != linear.order() - 1)
        return false;
    return is_sum_free(lengths);
}

auto with_template_colour_last(const LengthColouring & c, Colour s) -> LengthColouring
{
    auto linear = c.to_linear();
    int r = linear.num_colours();
    if (s < 1 || s > r)
        throw InvariantError("template colour " + std::to_string(s) + " out of range");
    vector<Colour> colours;
    for (Colour x : linear.stored())
        colours.push_back(x == s ? r : (x > s ? x - 1 : x));
    return LengthColouring::linear(linear.order(), r, std::move(colours));
}

auto phi(const LengthColouring & c, Colour template_colour) -> int
{
    for (int l = 1; l < c.order(); ++l)
        if (c.colour(l) == template_colour)
            return l - 1;
    throw InvariantError("template colour " + std::to_string(template_colour) + " colours no length");
}

auto tile(const TemplateGraph & t, int q) -> LengthColouring
{
    if (q < 1)
        throw InvariantError("repetition count must be at least 1");
    int period = t.order() - 1;
    int order = q * period + 1 + t.phi();
    vector<Colour> colours;
    colours.reserve(static_cast<std::size_t>(order - 1));
    for (int l = 1; l < order; ++l)
        colours.push_back(t.base().colour(((l - 1) % period) + 1));
    return LengthColouring::linear(order, t.base().num_colours(), std::move(colours));
}

auto repetition_check(const TemplateGraph & t, int q, const ParameterVector & p, const CheckOptions & options) -> CliqueReport
{
    if (p.size() != static_cast<std::size_t>(t.plain_colours()))
        throw ArityMismatch("template has " + std::to_string(t.plain_colours()) + " non-template colours but " + std::to_string(p.size()) + " bounds were given");
    auto g = expand_to_explicit(tile(t, q));

    CliqueReport report;
    report.passes = true;
    for (Colour s = 1; s <= t.plain_colours(); ++s) {
        int bound = p.for_colour(s);
        auto result = max_clique_in_colour(g, s, options.exact ? optional<int>{} : optional<int>{bound});
        report.per_colour_max.push_back(result.size);
        report.exact.push_back(options.exact || result.size < bound);
        report.witness.push_back(std::move(result.witness));
        report.bounds.push_back(bound);
        if (result.size >= bound)
            report.passes = false;
    }
    return report;
}

auto double_to_template(const LengthColouring & g, DoublingOrder variant) -> TemplateGraph
{
    auto linear = g.to_linear();
    int m = linear.order();
    int order = variant == DoublingOrder::twice ? 2 * m : 2 * m - 1;
    Colour fresh = linear.num_colours() + 1;
    vector<Colour> colours(linear.stored().begin(), linear.stored().end());
    colours.resize(static_cast<std::size_t>(order - 1), fresh);
    return TemplateGraph{LengthColouring::linear(order, fresh, std::move(colours))};
}

auto rainbow(int n) -> LengthColouring
{
    if (n < 2)
        throw InvariantError("rainbow colouring needs order at least 2");
    vector<Colour> colours;
    for (int l = 1; l < n; ++l)
        colours.push_back(l);
    return LengthColouring::linear(n, n - 1, std::move(colours));
}

auto UsefulnessReport::passes() const -> bool
{
    return tf_template && ! failing_reps() && ! failing_rainbow();
}

auto UsefulnessReport::failing_reps() const -> optional<int>
{
    for (std::size_t i = 0; i < repetitions.size(); ++i)
        if (! repetitions[i].passes)
            return static_cast<int>(i + 1);
    return std::nullopt;
}

auto UsefulnessReport::failing_rainbow() const -> optional<int>
{
    for (std::size_t i = 0; i < rainbow_compounds.size(); ++i)
        if (! rainbow_compounds[i].passes)
            return static_cast<int>(i + 2);
    return std::nullopt;
}

auto check_usefulness(const TemplateGraph & t, const ParameterVector & p, const UsefulnessOptions & options) -> UsefulnessReport
{
    UsefulnessReport report;
    report.tf_template = is_tf_template(t.base(), t.template_colour());

    vector<std::future<CliqueReport>> reps;
    for (int q = 1; q <= options.max_reps; ++q)
        reps.push_back(std::async(std::launch::async, [&, q] { return repetition_check(t, q, p); }));
    for (auto & r : reps)
        report.repetitions.push_back(r.get());

    for (int n = 2; n <= options.max_rainbow; ++n) {
        auto compound = template_compound(t, rainbow(n));
        vector<int> bounds = p.values();
        bounds.resize(bounds.size() + static_cast<std::size_t>(n - 1), 3);
        report.rainbow_compounds.push_back(ramsey_check(compound, ParameterVector{bounds}));
    }
    return report;
}

}
