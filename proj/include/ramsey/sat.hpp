#pragma once

#include <ramsey/colouring.hpp>
#include <ramsey/solver.hpp>
#include <ramsey/templates.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ramsey {

/// Variable ids for (free length, colour): id(l, s) = pos(l) * r + s.
class VarMap
{
public:
    VarMap() = default;
    VarMap(std::vector<int> free_lengths, int num_colours);

    auto free_lengths() const noexcept -> const std::vector<int> & { return _free; }
    auto num_colours() const noexcept -> int { return _num_colours; }
    auto num_vars() const noexcept -> int { return static_cast<int>(_free.size()) * _num_colours; }

    auto is_free(int length) const -> bool;
    auto id(int length, Colour s) const -> int;
    /// (length, colour) for an id in [1, num_vars].
    auto decode(int id) const -> std::pair<int, Colour>;

private:
    std::vector<int> _free;
    std::map<int, std::size_t> _position;
    int _num_colours = 0;
};

enum class EncodingKind
{
    cyclic,
    linear,
    extension
};

auto encoding_name(EncodingKind kind) -> std::string_view;

/// Prototype-extension search: a cyclic prototype of order n is kept on
/// lengths 1..n-1 and the target has order 2n + t.
struct SearchSpec
{
    LengthColouring prototype;
    int width = 1;
    /// One bound per prototype colour, then the template colour's bound.
    ParameterVector avoid;

    auto target_order() const -> int { return 2 * prototype.order() + width; }
    auto template_colour() const -> Colour { return prototype.num_colours() + 1; }
};

/// Length folding for the extension encoding. Lengths of at least n are
/// identified in mirror pairs l <-> 3n + t - 1 - l, so length n pairs with
/// the longest length 2n + t - 1 and both carry the template colour.
struct ExtensionShape
{
    int prototype_order = 0;
    int width = 0;

    auto target_order() const -> int { return 2 * prototype_order + width; }
    auto mirror(int length) const -> int;
    auto canonical(int length) const -> int;
    auto is_free(int canonical_length) const -> bool;
};

struct CnfInstance
{
    int num_vars = 0;
    std::vector<Clause> clauses;
    VarMap var_map;
    /// Canonical lengths whose colour the encoding fixes.
    std::map<int, Colour> fixed;
    EncodingKind kind = EncodingKind::cyclic;
    int order = 0;
    ParameterVector avoid;
    std::optional<ExtensionShape> extension;
    /// Generic DIMACS input carries no colouring metadata.
    bool has_meta = true;

    /// Representative in the encoding's variable domain.
    auto canonical(int length) const -> int;
    /// Canonical lengths in ascending order, fixed or free.
    auto canonical_lengths() const -> std::vector<int>;
    auto num_colours() const -> int { return static_cast<int>(avoid.size()); }
};

inline constexpr std::int64_t default_clause_cap = 10'000'000;

auto encode_cyclic(int order, const ParameterVector & p, std::int64_t clause_cap = default_clause_cap) -> CnfInstance;
auto encode_linear(int order, const ParameterVector & p, std::int64_t clause_cap = default_clause_cap) -> CnfInstance;
auto encode_extension(const SearchSpec & spec, std::int64_t clause_cap = default_clause_cap) -> CnfInstance;

/// Sorts literals by variable within each clause, then sorts and
/// deduplicates the clause list.
void canonicalise(std::vector<Clause> & clauses);

auto write_dimacs(const CnfInstance & instance) -> std::string;

/// Reads DIMACS CNF. Colouring metadata is recovered from the `c ramsey`,
/// `c map` and `c fixed` comments when present.
auto read_dimacs(std::string_view text) -> CnfInstance;

/// Decodes solver output (`s`/`v` lines or a bare literal list). Returns
/// nullopt for an UNSATISFIABLE document.
auto parse_model(std::string_view text, const CnfInstance & instance) -> std::optional<LengthColouring>;

/// Colouring from a satisfying assignment indexed by variable id.
auto decode_model(const std::vector<bool> & model, const CnfInstance & instance) -> LengthColouring;

/// Solver output in the usual `s` / `v` line format.
auto format_model(const SolveResult & result) -> std::string;

auto solve_internal(const CnfInstance & instance, const SolveBudget & budget = {}) -> SolveResult;

struct SearchOptions
{
    UsefulnessOptions usefulness;
    SolveBudget budget;
    int max_iterations = 500;
    std::int64_t clause_cap = default_clause_cap;
};

struct SearchResult
{
    std::optional<TemplateGraph> found;
    /// Search space exhausted: no template exists in this encoding.
    bool unsatisfiable = false;
    int iterations = 0;
    std::vector<std::string> log;
};

/// Encode, solve, decode, validate; on a violation add a clause excluding
/// the offending clique's colour assignment and solve again.
auto search_template(const SearchSpec & spec, const SearchOptions & options = {}) -> SearchResult;

}
