#pragma once

#include <ramsey/cliques.hpp>
#include <ramsey/colouring.hpp>

namespace ramsey {

/// A linear colouring whose last colour is a triangle-free template class
/// containing length t-1, where t is the order.
class TemplateGraph
{
public:
    /// Validates the template-colour invariants (class contains t-1 and is
    /// sum-free). Throws InvariantError otherwise. The non-template clique
    /// bounds are checked separately by `repetition_check`.
    explicit TemplateGraph(LengthColouring base);

    auto base() const noexcept -> const LengthColouring & { return _base; }
    auto order() const noexcept -> int { return _base.order(); }
    auto template_colour() const noexcept -> Colour { return _base.num_colours(); }
    /// Number of non-template colours.
    auto plain_colours() const noexcept -> int { return _base.num_colours() - 1; }
    auto phi() const noexcept -> int { return _phi; }
    auto is_template_length(int length) const -> bool { return _base.colour(length) == template_colour(); }

    auto operator==(const TemplateGraph &) const -> bool = default;

private:
    LengthColouring _base;
    int _phi = 0;
};

/// True iff no x, y (possibly equal) in `lengths` have x + y in `lengths`.
auto is_sum_free(const std::vector<int> & lengths) -> bool;

/// Colour s's lengths contain m-1 and induce a triangle-free subgraph.
/// Cyclic inputs are examined in linear form.
auto is_tf_template(const LengthColouring & c, Colour s) -> bool;

/// Moves colour s to the last id, shifting the colours above it down, so
/// the result can be wrapped as a TemplateGraph.
auto with_template_colour_last(const LengthColouring & c, Colour s) -> LengthColouring;

/// Lowest template-coloured length minus one. Throws InvariantError on an
/// empty template class.
auto phi(const LengthColouring & c, Colour template_colour) -> int;

/// The template pattern repeated q times: order q(t-1)+1+phi, length l
/// coloured as residue ((l-1) mod (t-1)) + 1 of the base.
auto tile(const TemplateGraph & t, int q) -> LengthColouring;

/// Clique numbers of the non-template colours of `tile(t, q)` against p
/// (which has one bound per non-template colour).
auto repetition_check(const TemplateGraph & t, int q, const ParameterVector & p, const CheckOptions & options = {}) -> CliqueReport;

enum class DoublingOrder
{
    twice,          ///< order 2m: agrees with the linear product order
    twice_minus_one ///< order 2m-1
};

/// Lengths 1..m-1 copy g; lengths from m upward take a fresh template
/// colour. phi = m-1 either way.
auto double_to_template(const LengthColouring & g, DoublingOrder variant = DoublingOrder::twice) -> TemplateGraph;

/// The linear colouring of order n giving every length its own colour.
auto rainbow(int n) -> LengthColouring;

struct UsefulnessOptions
{
    int max_reps = 8;
    int max_rainbow = 4;
};

struct UsefulnessReport
{
    bool tf_template = false;
    /// Index q-1 holds repetition_check(t, q, p).
    std::vector<CliqueReport> repetitions;
    /// Index n-2 holds the check of the compound with rainbow(n).
    std::vector<CliqueReport> rainbow_compounds;

    auto passes() const -> bool;
    /// First failing q, if any.
    auto failing_reps() const -> std::optional<int>;
    auto failing_rainbow() const -> std::optional<int>;
};

/// Repetition checks for q = 1..max_reps and compounds with rainbow
/// prototypes of orders 2..max_rainbow, all verified by the clique search.
auto check_usefulness(const TemplateGraph & t, const ParameterVector & p, const UsefulnessOptions & options = {}) -> UsefulnessReport;

}
