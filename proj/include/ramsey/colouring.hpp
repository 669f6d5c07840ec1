#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ramsey {

/// 1-based colour index.
using Colour = int;

/// Clique bounds per colour: a colouring passes when colour s has no
/// monochromatic clique of size avoid[s-1]. Every bound is at least 2.
class ParameterVector
{
public:
    ParameterVector() = default;
    explicit ParameterVector(std::vector<int> avoid);

    /// Parses "3,3,5". Whitespace around entries is ignored.
    static auto parse(std::string_view text) -> ParameterVector;

    auto size() const noexcept -> std::size_t { return _avoid.size(); }
    auto empty() const noexcept -> bool { return _avoid.empty(); }
    auto operator[](std::size_t i) const -> int { return _avoid[i]; }
    /// Bound for a 1-based colour.
    auto for_colour(Colour s) const -> int { return _avoid.at(static_cast<std::size_t>(s - 1)); }
    auto values() const noexcept -> const std::vector<int> & { return _avoid; }
    auto begin() const noexcept { return _avoid.begin(); }
    auto end() const noexcept { return _avoid.end(); }

    auto concat(const ParameterVector & other) const -> ParameterVector;
    auto sorted() const -> ParameterVector;
    auto to_string() const -> std::string;

    auto operator==(const ParameterVector &) const -> bool = default;
    auto operator<=>(const ParameterVector &) const = default;

private:
    std::vector<int> _avoid;
};

enum class Kind
{
    linear,
    cyclic
};

auto kind_name(Kind kind) -> std::string_view;

/// A colouring of K_m in which an edge's colour depends only on its length.
///
/// Linear colourings store c(1..m-1). Cyclic colourings store only
/// c(1..floor(m/2)); the reflected half c(l) = c(m-l) is implied, so it can
/// never be violated.
class LengthColouring
{
public:
    static auto linear(int order, int num_colours, std::vector<Colour> colours) -> LengthColouring;
    static auto cyclic(int order, int num_colours, std::vector<Colour> colours) -> LengthColouring;

    auto kind() const noexcept -> Kind { return _kind; }
    auto is_cyclic() const noexcept -> bool { return _kind == Kind::cyclic; }
    auto order() const noexcept -> int { return _order; }
    auto num_colours() const noexcept -> int { return _num_colours; }

    /// Colour of any length in [1, m-1]. Cyclic colourings fold l > m/2.
    auto colour(int length) const -> Colour;

    /// Stored assignments, index 0 holding length 1.
    auto stored() const noexcept -> std::span<const Colour> { return _colours; }

    /// Largest stored length: m-1 for linear, floor(m/2) for cyclic.
    auto max_stored_length() const noexcept -> int { return static_cast<int>(_colours.size()); }

    /// Full-range linear form c(1..m-1). Identity on linear colourings.
    auto to_linear() const -> LengthColouring;

    /// Lengths carrying colour s, ascending, over the full range [1, m-1].
    auto colour_class(Colour s) const -> std::vector<int>;

    auto operator==(const LengthColouring &) const -> bool = default;

private:
    LengthColouring(Kind kind, int order, int num_colours, std::vector<Colour> colours);

    Kind _kind = Kind::linear;
    int _order = 0;
    int _num_colours = 0;
    std::vector<Colour> _colours;
};

/// A full edge-colour matrix over vertices 0..m-1, stored upper-triangular
/// in row-major order: (0,1), (0,2), ..., (0,m-1), (1,2), ...
///
/// Orders 0 and 1 are permitted (they arise from neighbourhood restriction).
class ExplicitColouring
{
public:
    ExplicitColouring(int order, int num_colours, Colour fill = 1);
    ExplicitColouring(int order, int num_colours, std::vector<Colour> upper);

    auto order() const noexcept -> int { return _order; }
    auto num_colours() const noexcept -> int { return _num_colours; }
    auto num_edges() const noexcept -> std::size_t { return _edges.size(); }

    auto colour(int i, int j) const -> Colour;
    void set(int i, int j, Colour c);

    /// Row-major upper-triangular entries.
    auto entries() const -> std::vector<Colour>;

    auto operator==(const ExplicitColouring &) const -> bool = default;

private:
    auto index(int i, int j) const -> std::size_t;

    int _order = 0;
    int _num_colours = 0;
    std::vector<std::uint16_t> _edges;
};

/// min(|j-i|, m-|j-i|). Throws DegenerateEdge when i == j.
auto cyclic_length(int i, int j, int order) -> int;

auto expand_to_explicit(const LengthColouring & c) -> ExplicitColouring;

/// True iff c(l) = c(m-l) for every l in [1, m-1]. Cyclic inputs are
/// trivially symmetric.
auto check_cyclic_symmetry(const LengthColouring & c) -> bool;

/// The cyclic representation of a symmetric linear colouring, or nullopt.
auto to_cyclic(const LengthColouring & c) -> std::optional<LengthColouring>;

/// A colouring file: the colouring itself plus optional metadata.
struct ColouringDocument
{
    std::variant<LengthColouring, ExplicitColouring> body;
    std::optional<ParameterVector> avoid;
    std::optional<Colour> template_colour;
    std::string comment;

    auto is_explicit() const noexcept -> bool { return std::holds_alternative<ExplicitColouring>(body); }
    auto order() const -> int;
    auto num_colours() const -> int;
    auto explicit_form() const -> ExplicitColouring;
};

auto parse_colouring(std::string_view text) -> ColouringDocument;
auto serialize_colouring(const ColouringDocument & doc) -> std::string;

auto load_colouring(const std::filesystem::path & path) -> ColouringDocument;
void save_colouring(const std::filesystem::path & path, const ColouringDocument & doc);

/// Reads a whole file; throws Error when unreadable.
auto read_file(const std::filesystem::path & path) -> std::string;
void write_file(const std::filesystem::path & path, std::string_view contents);

}
