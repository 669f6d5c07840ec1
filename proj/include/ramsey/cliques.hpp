#pragma once

#include <ramsey/colouring.hpp>

#include <optional>
#include <vector>

namespace ramsey {

struct CliqueResult
{
    int size = 0;
    std::vector<int> witness;
};

/// Exact maximum monochromatic clique in colour s. Branch-and-bound over
/// bit-vector adjacency rows, bounded by greedy sequential colouring.
///
/// When `stop_at` is given the search returns as soon as it holds a clique
/// of that size; the result is then a lower bound with a valid witness.
auto max_clique_in_colour(const ExplicitColouring & g, Colour s, std::optional<int> stop_at = std::nullopt) -> CliqueResult;

/// Same search restricted to vertices in `among`. Witness vertices are
/// indices into g, not into `among`.
auto max_clique_among(const ExplicitColouring & g, Colour s, const std::vector<int> & among, std::optional<int> stop_at = std::nullopt) -> CliqueResult;

inline constexpr int default_brute_force_cap = 16;

/// Exhaustive subset enumeration. Refuses (CapExceeded) when the order is
/// above `cap`; the hard ceiling is 24.
auto max_clique_brute(const ExplicitColouring & g, Colour s, int cap = default_brute_force_cap) -> int;

/// Re-checks that `vertices` is a clique in colour s.
auto is_monochromatic_clique(const ExplicitColouring & g, Colour s, const std::vector<int> & vertices) -> bool;

struct CliqueReport
{
    /// Per colour (index 0 is colour 1). Unused colours report 1.
    std::vector<int> per_colour_max;
    /// False where the search stopped early at the bound; the value is
    /// then "at least" rather than exact.
    std::vector<bool> exact;
    std::vector<std::vector<int>> witness;
    /// The clique bounds checked against.
    std::vector<int> bounds;
    bool passes = false;

    auto failing_colours() const -> std::vector<Colour>;
};

struct CheckOptions
{
    /// Compute exact clique numbers instead of stopping at each bound.
    bool exact = false;
    /// Run colours concurrently once the order exceeds this.
    int parallel_threshold = 48;
};

auto ramsey_check(const ExplicitColouring & g, const ParameterVector & p, const CheckOptions & options = {}) -> CliqueReport;

/// Uses vertex-transitivity for cyclic colourings: every clique can be
/// rotated to contain vertex 0, so only N_s(0) is searched.
auto ramsey_check(const LengthColouring & c, const ParameterVector & p, const CheckOptions & options = {}) -> CliqueReport;

auto ramsey_check(const ColouringDocument & doc, const ParameterVector & p, const CheckOptions & options = {}) -> CliqueReport;

auto colour_degree(const ExplicitColouring & g, int v, Colour s) -> int;

/// Colour-s degree when every vertex has the same one, else nullopt.
auto regular_colour_degree(const ExplicitColouring & g, Colour s) -> std::optional<int>;

struct Neighbourhood
{
    ExplicitColouring colouring;
    /// vertices[i] is the vertex of the parent graph that became vertex i.
    std::vector<int> vertices;
    /// Order 0 or 1: nothing meaningful left to check.
    bool degenerate = false;
};

/// The colouring induced on {u : edge (u, v) has colour s}. If g passes
/// (k_1, ..., k_r), the result passes the same vector with k_s lowered by 1.
auto neighbourhood_restrict(const ExplicitColouring & g, int v, Colour s) -> Neighbourhood;

}
