#pragma once

#include <ramsey/cliques.hpp>
#include <ramsey/error.hpp>
#include <ramsey/radical.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ramsey {

using FactId = std::int64_t;

enum class FactKind
{
    graph_exists,
    ramsey_lower_bound,
    gamma_lower_bound
};

/// Strongest known structure of a graph; cyclic graphs are also linear.
enum class Structure
{
    general,
    linear,
    cyclic
};

auto fact_kind_name(FactKind kind) -> std::string_view;
auto structure_name(Structure s) -> std::string_view;

struct Certificate
{
    enum class Type
    {
        explicit_file,
        asserted,
        derived
    };

    Type type = Type::asserted;
    std::string file;
    bool verified = false;
    std::string source;
    std::string rule;
    std::vector<FactId> parents;
    /// Rule-specific argument: the appended bound for R1.
    std::optional<int> argument;

    auto operator==(const Certificate &) const -> bool = default;
};

struct BoundFact
{
    FactId id = 0;
    FactKind kind = FactKind::graph_exists;
    /// Canonical order: ascending, except that a template graph keeps its
    /// template colour's bound last. Gamma facts hold the single k.
    std::vector<int> params;
    /// Graph order or Ramsey lower bound.
    std::uint64_t value = 0;
    std::optional<Radical> gamma;
    Structure structure = Structure::general;
    /// Present for template graphs.
    std::optional<int> template_phi;
    /// Parameter index -> degree, for colours in which every vertex has
    /// the same degree.
    std::map<int, std::uint64_t> regular_degree;
    Certificate certificate;
    std::string note;

    auto is_template() const noexcept -> bool { return template_phi.has_value(); }
    /// Equality ignoring the id.
    auto same_content(const BoundFact & other) const -> bool;
    /// "graph (3,3;5) cyclic", "R(3,3,3,3) >= 42", "Gamma(6) >= 15.297058".
    auto describe() const -> std::string;
    auto status_marker() const -> char;
};

/// Normalises a fact in place: bounds equal to 2 are dropped from graph and
/// Ramsey facts (such a colour can have no edges), parameters are put in
/// canonical order and degree indices follow them.
void canonicalise(BoundFact & fact);

auto fact_to_json(const BoundFact & fact) -> std::string;
auto fact_from_json(std::string_view line) -> BoundFact;

/// An explicit certificate failed verification.
class RejectedFact : public Error
{
public:
    RejectedFact(const std::string & message, CliqueReport report) :
        Error(message),
        _report(std::move(report))
    {
    }

    auto report() const noexcept -> const CliqueReport & { return _report; }

private:
    CliqueReport _report;
};

class NotFound : public Error
{
public:
    using Error::Error;
};

inline constexpr int rule_count = 11;

/// Parses "r1,r3,R7" into rule numbers.
auto parse_rules(std::string_view text) -> std::set<int>;
auto rule_id(int rule) -> std::string;

struct ClosureOptions
{
    std::set<int> rules{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    int depth = 4;
    int max_colours = 4;
    int max_k = 10;
    std::uint64_t max_value = std::uint64_t{1} << 62;
};

struct Query
{
    FactKind kind = FactKind::ramsey_lower_bound;
    std::vector<int> params;
};

/// Accepts "R(3,6,6)", "3,6,6", "graph(3,6,6)", "Gamma(6)", "Γ(6)".
auto parse_query(std::string_view text) -> Query;

enum class TableFormat
{
    markdown,
    csv
};

struct TableRange
{
    int k_min = 3, k_max = 10;
    int r_min = 1, r_max = 4;
};

class Ledger
{
public:
    auto facts() const noexcept -> const std::vector<BoundFact> & { return _facts; }
    auto size() const noexcept -> std::size_t { return _facts.size(); }
    auto fact(FactId id) const -> const BoundFact &;

    /// Validates and stores a fact, returning its id. An identical fact
    /// already present is not duplicated. Explicit certificates are
    /// re-verified against `base_dir`.
    auto add_fact(BoundFact fact, const std::filesystem::path & base_dir = {}) -> FactId;

    /// Verifies a colouring file carrying an `avoid` vector and records it
    /// as an explicit graph fact. `reference` is the path stored in the
    /// certificate, resolved against `base_dir` on re-verification.
    auto add_explicit(const std::filesystem::path & reference, const std::filesystem::path & base_dir = {}) -> FactId;

    /// Applies the rules pass by pass, in id order, until nothing new
    /// appears or the depth is reached. Returns the new fact ids.
    auto derive_closure(const ClosureOptions & options = {}) -> std::vector<FactId>;

    /// Best fact for the query. A Ramsey query with no stored bound falls
    /// back to the best graph, lifted by R7 (the returned fact has id 0).
    auto best_bound(const Query & query) const -> BoundFact;

    /// Indented parent chain, one fact per line.
    auto provenance(const BoundFact & fact) const -> std::string;
    /// Rule ids along the chain, parents first, without repeats.
    auto chain_rules(const BoundFact & fact) const -> std::vector<std::string>;

    auto emit_table(const TableRange & range, TableFormat format) const -> std::string;

    /// Re-derives every derived fact from its parents and re-verifies every
    /// explicit file. Returns one line per problem.
    auto audit(const std::filesystem::path & base_dir = {}, bool reverify_files = true) const -> std::vector<std::string>;

    /// One canonical JSON object per line.
    auto serialize(FactId after = 0) const -> std::string;
    static auto parse(std::string_view text) -> Ledger;

private:
    auto dominated(const BoundFact & candidate) const -> bool;
    auto push(BoundFact fact) -> FactId;
    auto recompute_matches(const BoundFact & fact, const ClosureOptions & options) const -> bool;

    std::vector<BoundFact> _facts;
    std::map<std::pair<FactKind, std::vector<int>>, std::vector<FactId>> _by_key;
};

/// Verifies a colouring file and builds the explicit fact for it, without
/// storing it anywhere.
auto explicit_fact(const std::filesystem::path & reference, const std::filesystem::path & base_dir = {}) -> BoundFact;

/// Advisory exclusive lock on `<store>.lock`, released on destruction.
class StoreLock
{
public:
    explicit StoreLock(const std::filesystem::path & store);
    ~StoreLock();
    StoreLock(const StoreLock &) = delete;
    auto operator=(const StoreLock &) -> StoreLock & = delete;

private:
    int _fd = -1;
};

/// Loads a fact store; a missing file is an empty ledger.
auto load_ledger(const std::filesystem::path & store) -> Ledger;
/// Appends the facts with id above `after`, checking their provenance first.
void append_facts(const std::filesystem::path & store, const Ledger & ledger, FactId after);

}
