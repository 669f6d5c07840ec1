#pragma once

#include <ramsey/colouring.hpp>
#include <ramsey/templates.hpp>

#include <cstdint>
#include <string_view>

namespace ramsey {

enum class CompoundRule
{
    product_2017,
    template_2021,
    song_grid
};

auto rule_name(CompoundRule rule) -> std::string_view;

/// What a construction promises before it is built: the exact order and
/// the clique bounds of the result.
struct CompoundRecipe
{
    CompoundRule rule;
    std::int64_t predicted_order;
    ParameterVector predicted_avoid;
};

/// ((2m-1)(2n-1)+1)/2.
auto product_order(std::int64_t m, std::int64_t n) -> std::int64_t;

/// (t-1)(n-1)+1+phi.
auto template_compound_order(std::int64_t t, std::int64_t n, std::int64_t phi) -> std::int64_t;

/// Linear product of A (order m) and B (order n), B's colours offset by
/// A's colour count. Writing l = (2m-1)q + r with 0 <= r <= 2m-2, length l
/// takes A(r) for 1 <= r <= m-1, B(q) for r = 0 and B(q+1) for r >= m.
auto product_linear(const LengthColouring & a, const LengthColouring & b) -> LengthColouring;

/// product_linear on two cyclic colourings, returned in cyclic form.
/// Throws InternalError if the symmetry fails to hold.
auto product_cyclic(const LengthColouring & a, const LengthColouring & b) -> LengthColouring;

/// Compound of a template (order t) with a linear B (order n). Length l
/// with residue r = ((l-1) mod (t-1)) + 1 takes T(r) when r is not a
/// template length and B(ceil(l/(t-1))) otherwise; B's colours follow T's
/// non-template colours. The template colour does not appear.
auto template_compound(const TemplateGraph & t, const LengthColouring & b) -> LengthColouring;

/// Grid product on vertex pairs (u, v) -> u*|H| + v: colour from G where
/// the first coordinates differ, from H otherwise.
auto song_product(const ExplicitColouring & g, const ExplicitColouring & h) -> ExplicitColouring;

/// Pointwise (p_i q_i + 1) from G avoiding (p_i + 1) and H avoiding (q_i + 1).
auto song_avoid(const ParameterVector & g_avoid, const ParameterVector & h_avoid) -> ParameterVector;

auto is_prime(std::int64_t q) -> bool;

/// Cyclic colouring of order q: quadratic residues get colour 1, the rest
/// colour 2. Requires q prime and q = 1 (mod 4).
auto paley_colouring(int q) -> LengthColouring;

/// The single-edge colouring K_2, avoiding (3).
auto single_edge() -> LengthColouring;

/// The cyclic (3,3;5) colouring.
auto pentagon() -> LengthColouring;

}
