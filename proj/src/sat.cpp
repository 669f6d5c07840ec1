#include <ramsey/cliques.hpp>
#include <ramsey/constructions.hpp>
#include <ramsey/error.hpp>
#include <ramsey/sat.hpp>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

using std::int64_t;
using std::optional;
using std::string;
using std::string_view;
using std::vector;

namespace ramsey {

VarMap::VarMap(vector<int> free_lengths, int num_colours) :
    _free(std::move(free_lengths)),
    _num_colours(num_colours)
{
    for (std::size_t i = 0; i < _free.size(); ++i)
        if (! _position.emplace(_free[i], i).second)
            throw InvariantError("length " + std::to_string(_free[i]) + " listed twice in variable map");
}

auto VarMap::is_free(int length) const -> bool
{
    return _position.contains(length);
}

auto VarMap::id(int length, Colour s) const -> int
{
    auto it = _position.find(length);
    if (it == _position.end())
        throw InvariantError("length " + std::to_string(length) + " has no variables");
    if (s < 1 || s > _num_colours)
        throw InvariantError("colour " + std::to_string(s) + " out of range");
    return static_cast<int>(it->second) * _num_colours + s;
}

auto VarMap::decode(int id) const -> std::pair<int, Colour>
{
    if (id < 1 || id > num_vars())
        throw InvariantError("variable " + std::to_string(id) + " out of range");
    auto pos = static_cast<std::size_t>((id - 1) / _num_colours);
    return {_free[pos], (id - 1) % _num_colours + 1};
}

auto encoding_name(EncodingKind kind) -> string_view
{
    switch (kind) {
    case EncodingKind::cyclic: return "cyclic";
    case EncodingKind::linear: return "linear";
    case EncodingKind::extension: return "extension";
    }
    return "unknown";
}

auto ExtensionShape::mirror(int length) const -> int
{
    return 3 * prototype_order + width - 1 - length;
}

auto ExtensionShape::canonical(int length) const -> int
{
    if (length < prototype_order)
        return length;
    return std::min(length, mirror(length));
}

auto ExtensionShape::is_free(int c) const -> bool
{
    int n = prototype_order, t = width;
    auto in_band = [&](int l) { return l >= n + 1 && l <= n + t; };
    return c >= n && (in_band(c) || in_band(mirror(c)));
}

auto CnfInstance::canonical(int length) const -> int
{
    switch (kind) {
    case EncodingKind::cyclic: return std::min(length, order - length);
    case EncodingKind::linear: return length;
    case EncodingKind::extension: return extension->canonical(length);
    }
    return length;
}

auto CnfInstance::canonical_lengths() const -> vector<int>
{
    vector<int> result;
    for (int l = 1; l < order; ++l)
        if (canonical(l) == l)
            result.push_back(l);
    return result;
}

void canonicalise(vector<Clause> & clauses)
{
    for (auto & clause : clauses) {
        std::sort(clause.begin(), clause.end(), [](int a, int b) {
            return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
        });
        clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    }
    std::sort(clauses.begin(), clauses.end());
    clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
}

namespace
{
    auto binomial_saturating(int64_t n, int64_t k) -> int64_t
    {
        if (k < 0 || k > n)
            return 0;
        k = std::min(k, n - k);
        long double value = 1;
        for (int64_t i = 1; i <= k; ++i)
            value = value * static_cast<long double>(n - k + i) / static_cast<long double>(i);
        return value > 9e18L ? INT64_MAX : static_cast<int64_t>(value + 0.5L);
    }

    // Fills clauses for an instance whose kind, order, avoid, fixed and
    // var_map are already set.
    void generate_clauses(CnfInstance & instance, int64_t clause_cap)
    {
        int m = instance.order, r = instance.num_colours();

        int64_t predicted = static_cast<int64_t>(instance.var_map.free_lengths().size()) * (1 + r * (r - 1) / 2);
        for (Colour s = 1; s <= r; ++s)
            predicted = std::min<int64_t>(INT64_MAX / 2, predicted + binomial_saturating(m - 1, instance.avoid.for_colour(s) - 1));
        if (predicted > clause_cap)
            throw CapExceeded("encoding would generate up to " + std::to_string(predicted) + " clauses (cap " + std::to_string(clause_cap) + ")");

        vector<Clause> clauses;
        for (int l : instance.var_map.free_lengths()) {
            Clause at_least_one;
            for (Colour s = 1; s <= r; ++s)
                at_least_one.push_back(instance.var_map.id(l, s));
            clauses.push_back(std::move(at_least_one));
            for (Colour a = 1; a <= r; ++a)
                for (Colour b = a + 1; b <= r; ++b)
                    clauses.push_back({-instance.var_map.id(l, a), -instance.var_map.id(l, b)});
        }

        vector<int> fixed_colour(static_cast<std::size_t>(m), 0);
        vector<bool> is_free(static_cast<std::size_t>(m), false);
        for (auto [l, s] : instance.fixed)
            fixed_colour[static_cast<std::size_t>(l)] = s;
        for (int l : instance.var_map.free_lengths())
            is_free[static_cast<std::size_t>(l)] = true;

        auto length_between = [&](int i, int j) {
            int d = j - i;
            return instance.canonical(d);
        };

        for (Colour s = 1; s <= r; ++s) {
            int k = instance.avoid.for_colour(s);
            if (k - 1 > m - 1)
                continue;
            vector<int> chosen{0};
            vector<int> free_stack;

            // Depth-first over {0 < v_1 < ... < v_{k-1}}, pruning as soon as
            // a pair has a length fixed to a different colour.
            auto extend = [&](auto & self, int from) -> void {
                if (static_cast<int>(chosen.size()) == k) {
                    Clause clause;
                    for (int l : free_stack)
                        clause.push_back(-instance.var_map.id(l, s));
                    clauses.push_back(std::move(clause));
                    return;
                }
                int remaining = k - static_cast<int>(chosen.size());
                for (int v = from; v <= m - remaining; ++v) {
                    auto mark = free_stack.size();
                    bool satisfied = false;
                    for (int u : chosen) {
                        int c = length_between(u, v);
                        int fixed = fixed_colour[static_cast<std::size_t>(c)];
                        if (fixed != 0 && fixed != s) {
                            satisfied = true;
                            break;
                        }
                        if (is_free[static_cast<std::size_t>(c)])
                            free_stack.push_back(c);
                    }
                    if (! satisfied) {
                        chosen.push_back(v);
                        self(self, v + 1);
                        chosen.pop_back();
                    }
                    free_stack.resize(mark);
                }
            };
            extend(extend, 1);
        }

        canonicalise(clauses);
        instance.clauses = std::move(clauses);
        instance.num_vars = instance.var_map.num_vars();
    }

    auto plain_instance(EncodingKind kind, int order, const ParameterVector & p, int64_t clause_cap) -> CnfInstance
    {
        if (order < 3)
            throw InvariantError("encoding needs order at least 3");
        if (p.empty())
            throw InvariantError("encoding needs at least one colour");
        CnfInstance instance;
        instance.kind = kind;
        instance.order = order;
        instance.avoid = p;
        vector<int> free = instance.canonical_lengths();
        instance.var_map = VarMap{free, static_cast<int>(p.size())};
        generate_clauses(instance, clause_cap);
        return instance;
    }
}

auto encode_cyclic(int order, const ParameterVector & p, int64_t clause_cap) -> CnfInstance
{
    return plain_instance(EncodingKind::cyclic, order, p, clause_cap);
}

auto encode_linear(int order, const ParameterVector & p, int64_t clause_cap) -> CnfInstance
{
    return plain_instance(EncodingKind::linear, order, p, clause_cap);
}

auto encode_extension(const SearchSpec & spec, int64_t clause_cap) -> CnfInstance
{
    const auto & prototype = spec.prototype;
    int n = prototype.order(), t = spec.width;
    if (! prototype.is_cyclic())
        throw InvariantError("extension search needs a cyclic prototype");
    if (t < 1 || t >= 2 * n)
        throw InvariantError("extension width " + std::to_string(t) + " outside [1, " + std::to_string(2 * n - 1) + "] for prototype order " + std::to_string(n));
    if (spec.avoid.size() != static_cast<std::size_t>(prototype.num_colours() + 1))
        throw ArityMismatch("extension needs " + std::to_string(prototype.num_colours() + 1) + " clique bounds (prototype colours then template colour), got " + std::to_string(spec.avoid.size()));

    vector<int> prototype_avoid(spec.avoid.begin(), spec.avoid.end() - 1);
    if (! ramsey_check(prototype, ParameterVector{prototype_avoid}).passes)
        throw InvariantError("prototype does not pass its own clique bounds " + ParameterVector{prototype_avoid}.to_string());

    CnfInstance instance;
    instance.kind = EncodingKind::extension;
    instance.extension = ExtensionShape{n, t};
    instance.order = spec.target_order();
    instance.avoid = spec.avoid;

    vector<int> free;
    for (int c : instance.canonical_lengths()) {
        if (c < n)
            instance.fixed[c] = prototype.colour(c);
        else if (instance.extension->is_free(c))
            free.push_back(c);
        else
            instance.fixed[c] = spec.template_colour();
    }
    instance.var_map = VarMap{free, static_cast<int>(spec.avoid.size())};
    generate_clauses(instance, clause_cap);
    return instance;
}

auto write_dimacs(const CnfInstance & instance) -> string
{
    std::ostringstream out;
    if (instance.has_meta) {
        out << "c ramsey encoding " << encoding_name(instance.kind) << " order " << instance.order << " avoid " << instance.avoid.to_string() << '\n';
        if (instance.extension)
            out << "c ramsey extension prototype-order " << instance.extension->prototype_order << " width " << instance.extension->width << '\n';
        for (int l : instance.var_map.free_lengths())
            for (Colour s = 1; s <= instance.var_map.num_colours(); ++s)
                out << "c map " << l << ' ' << s << ' ' << instance.var_map.id(l, s) << '\n';
        for (auto [l, s] : instance.fixed)
            out << "c fixed " << l << ' ' << s << '\n';
    }
    out << "p cnf " << instance.num_vars << ' ' << instance.clauses.size() << '\n';
    for (const auto & clause : instance.clauses) {
        for (int lit : clause)
            out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

auto read_dimacs(string_view text) -> CnfInstance
{
    CnfInstance instance;
    instance.has_meta = false;
    std::istringstream in{string(text)};
    string line;
    bool header = false;
    int64_t declared_clauses = 0;
    vector<std::pair<int, std::pair<int, int>>> maps;
    Clause current;
    int line_number = 0;

    while (std::getline(in, line)) {
        ++line_number;
        auto where = "line " + std::to_string(line_number);
        std::istringstream words{line};
        string first;
        if (! (words >> first))
            continue;
        if (first == "c") {
            string tag;
            words >> tag;
            if (tag == "ramsey") {
                string what;
                words >> what;
                if (what == "encoding") {
                    string kind, order_word, avoid_word, avoid;
                    words >> kind >> order_word >> instance.order >> avoid_word >> avoid;
                    if (kind == "cyclic")
                        instance.kind = EncodingKind::cyclic;
                    else if (kind == "linear")
                        instance.kind = EncodingKind::linear;
                    else if (kind == "extension")
                        instance.kind = EncodingKind::extension;
                    else
                        throw ParseError(where, "unknown encoding kind '" + kind + "'");
                    if (order_word != "order" || avoid_word != "avoid" || ! words)
                        throw ParseError(where, "malformed encoding comment");
                    instance.avoid = ParameterVector::parse(avoid);
                    instance.has_meta = true;
                }
                else if (what == "extension") {
                    string a, b;
                    ExtensionShape shape;
                    words >> a >> shape.prototype_order >> b >> shape.width;
                    if (a != "prototype-order" || b != "width" || ! words)
                        throw ParseError(where, "malformed extension comment");
                    instance.extension = shape;
                }
            }
            else if (tag == "map") {
                int l = 0, s = 0, id = 0;
                if (! (words >> l >> s >> id))
                    throw ParseError(where, "malformed map comment");
                maps.push_back({id, {l, s}});
            }
            else if (tag == "fixed") {
                int l = 0, s = 0;
                if (! (words >> l >> s))
                    throw ParseError(where, "malformed fixed comment");
                instance.fixed[l] = s;
            }
            continue;
        }
        if (first == "p") {
            string format;
            if (! (words >> format >> instance.num_vars >> declared_clauses) || format != "cnf")
                throw ParseError(where, "malformed problem line");
            header = true;
            continue;
        }
        if (! header)
            throw ParseError(where, "clause before problem line");
        std::istringstream literals{line};
        int lit = 0;
        while (literals >> lit) {
            if (lit == 0) {
                instance.clauses.push_back(std::move(current));
                current.clear();
            }
            else {
                if (std::abs(lit) > instance.num_vars)
                    throw ParseError(where, "literal " + std::to_string(lit) + " exceeds declared variable count");
                current.push_back(lit);
            }
        }
        if (! literals.eof())
            throw ParseError(where, "expected integer literals");
    }
    if (! header)
        throw ParseError("$", "missing problem line");
    if (! current.empty())
        throw ParseError("$", "last clause is not zero-terminated");
    if (static_cast<int64_t>(instance.clauses.size()) != declared_clauses)
        throw ParseError("$", "problem line declares " + std::to_string(declared_clauses) + " clauses, found " + std::to_string(instance.clauses.size()));

    if (instance.has_meta) {
        if (instance.kind == EncodingKind::extension && ! instance.extension)
            throw ParseError("$", "extension encoding without its shape comment");
        std::sort(maps.begin(), maps.end());
        vector<int> free;
        for (const auto & [id, entry] : maps)
            if (entry.second == 1)
                free.push_back(entry.first);
        instance.var_map = VarMap{free, instance.num_colours()};
        for (const auto & [id, entry] : maps)
            if (instance.var_map.id(entry.first, entry.second) != id)
                throw ParseError("$", "map comment for length " + std::to_string(entry.first) + " colour " + std::to_string(entry.second) + " disagrees with the id layout");
        if (instance.var_map.num_vars() != instance.num_vars)
            throw ParseError("$", "map comments cover " + std::to_string(instance.var_map.num_vars()) + " variables, header declares " + std::to_string(instance.num_vars));
    }
    return instance;
}

auto decode_model(const vector<bool> & model, const CnfInstance & instance) -> LengthColouring
{
    if (! instance.has_meta)
        throw Error("instance carries no colouring metadata to decode against");
    std::map<int, Colour> colour_of = instance.fixed;
    for (int l : instance.var_map.free_lengths()) {
        vector<Colour> true_colours;
        for (Colour s = 1; s <= instance.num_colours(); ++s) {
            auto id = static_cast<std::size_t>(instance.var_map.id(l, s));
            if (id < model.size() && model[id])
                true_colours.push_back(s);
        }
        if (true_colours.empty())
            throw ParseError("model", "length " + std::to_string(l) + " has no true colour variable");
        if (true_colours.size() > 1)
            throw ParseError("model", "length " + std::to_string(l) + " has " + std::to_string(true_colours.size()) + " true colour variables");
        colour_of[l] = true_colours.front();
    }

    int r = instance.num_colours();
    auto lookup = [&](int l) {
        auto it = colour_of.find(instance.canonical(l));
        if (it == colour_of.end())
            throw ParseError("model", "length " + std::to_string(l) + " has no assignment");
        return it->second;
    };

    vector<Colour> colours;
    if (instance.kind == EncodingKind::cyclic) {
        for (int l = 1; l <= instance.order / 2; ++l)
            colours.push_back(lookup(l));
        return LengthColouring::cyclic(instance.order, r, std::move(colours));
    }
    for (int l = 1; l < instance.order; ++l)
        colours.push_back(lookup(l));
    return LengthColouring::linear(instance.order, r, std::move(colours));
}

auto parse_model(string_view text, const CnfInstance & instance) -> optional<LengthColouring>
{
    std::istringstream in{string(text)};
    string line;
    vector<bool> model(static_cast<std::size_t>(instance.num_vars) + 1, false);
    vector<bool> mentioned(model.size(), false);
    bool any_literal = false;

    while (std::getline(in, line)) {
        std::istringstream words{line};
        string first;
        if (! (words >> first))
            continue;
        if (first == "c")
            continue;
        if (first == "s") {
            string status;
            std::getline(words, status);
            status.erase(0, status.find_first_not_of(' '));
            if (status == "UNSATISFIABLE")
                return std::nullopt;
            if (status != "SATISFIABLE")
                throw ParseError("model", "solver reported '" + status + "'");
            continue;
        }
        std::istringstream literals{first == "v" ? line.substr(line.find('v') + 1) : line};
        int lit = 0;
        while (literals >> lit) {
            if (lit == 0)
                continue;
            auto v = static_cast<std::size_t>(std::abs(lit));
            if (v >= model.size())
                throw ParseError("model", "literal " + std::to_string(lit) + " outside variable range");
            model[v] = lit > 0;
            mentioned[v] = true;
            any_literal = true;
        }
        if (! literals.eof())
            throw ParseError("model", "unexpected token in '" + line + "'");
    }
    if (! any_literal && instance.num_vars > 0)
        throw ParseError("model", "no assignment found");
    for (int l : instance.var_map.free_lengths()) {
        bool seen = false;
        for (Colour s = 1; s <= instance.num_colours(); ++s)
            seen = seen || mentioned[static_cast<std::size_t>(instance.var_map.id(l, s))];
        if (! seen)
            throw ParseError("model", "assignment is missing the variables of length " + std::to_string(l));
    }
    return decode_model(model, instance);
}

auto format_model(const SolveResult & result) -> string
{
    switch (result.status) {
    case SolveStatus::unsatisfiable: return "s UNSATISFIABLE\n";
    case SolveStatus::unknown: return "s UNKNOWN\n";
    case SolveStatus::satisfiable: break;
    }
    std::ostringstream out;
    out << "s SATISFIABLE\n";
    int on_line = 0;
    for (std::size_t v = 1; v < result.model.size(); ++v) {
        if (on_line == 0)
            out << 'v';
        out << ' ' << (result.model[v] ? "" : "-") << v;
        if (++on_line == 10) {
            out << '\n';
            on_line = 0;
        }
    }
    if (on_line == 0)
        out << 'v';
    out << " 0\n";
    return out.str();
}

auto solve_internal(const CnfInstance & instance, const SolveBudget & budget) -> SolveResult
{
    return solve_cnf(instance.num_vars, instance.clauses, budget);
}

namespace
{
    // Clause forbidding the current colours of the free base lengths behind
    // a clique. `residue` maps a compound length to its base length;
    // `colour_for` gives the base colour that produced each pair's colour.
    template <typename Residue, typename ColourFor>
    auto violation_clause(const CnfInstance & instance, const vector<int> & clique, Residue residue, ColourFor colour_for) -> Clause
    {
        Clause clause;
        for (std::size_t a = 0; a < clique.size(); ++a)
            for (std::size_t b = a + 1; b < clique.size(); ++b) {
                int base = residue(std::abs(clique[b] - clique[a]));
                int c = instance.canonical(base);
                if (instance.var_map.is_free(c))
                    clause.push_back(-instance.var_map.id(c, colour_for(base)));
            }
        std::sort(clause.begin(), clause.end());
        clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
        return clause;
    }

    auto blocking_clause(const CnfInstance & instance, const LengthColouring & base) -> Clause
    {
        Clause clause;
        for (int l : instance.var_map.free_lengths())
            clause.push_back(-instance.var_map.id(l, base.colour(l)));
        return clause;
    }
}

auto search_template(const SearchSpec & spec, const SearchOptions & options) -> SearchResult
{
    SearchResult result;
    auto instance = encode_extension(spec, options.clause_cap);
    vector<int> plain(spec.avoid.begin(), spec.avoid.end() - 1);
    ParameterVector plain_avoid{plain};
    int period = spec.target_order() - 1;

    auto note = [&](const string & message) { result.log.push_back("iteration " + std::to_string(result.iterations) + ": " + message); };

    while (result.iterations < options.max_iterations) {
        ++result.iterations;
        auto solved = solve_internal(instance, options.budget);
        if (solved.status == SolveStatus::unsatisfiable) {
            result.unsatisfiable = true;
            note("unsatisfiable after " + std::to_string(instance.clauses.size()) + " clauses");
            return result;
        }
        if (solved.status == SolveStatus::unknown) {
            note("solver budget exhausted");
            return result;
        }

        auto base = decode_model(solved.model, instance);
        auto identity = [](int l) { return l; };
        auto residue = [&](int l) { return ((l - 1) % period) + 1; };

        Clause refinement;
        auto add = [&](Clause clause, const string & why) {
            note(why);
            if (clause.empty()) {
                result.unsatisfiable = true;
                note("violation involves fixed lengths only");
            }
            refinement = std::move(clause);
        };

        auto base_report = ramsey_check(base, spec.avoid);
        if (! base_report.passes) {
            Colour s = base_report.failing_colours().front();
            add(violation_clause(instance, base_report.witness[static_cast<std::size_t>(s - 1)], identity, [&](int l) { return base.colour(l); }),
                "base colouring has a clique in colour " + std::to_string(s));
        }
        else {
            TemplateGraph candidate{base};
            for (int q = 1; q <= options.usefulness.max_reps && refinement.empty() && ! result.unsatisfiable; ++q) {
                auto report = repetition_check(candidate, q, plain_avoid);
                if (report.passes)
                    continue;
                Colour s = report.failing_colours().front();
                add(violation_clause(instance, report.witness[static_cast<std::size_t>(s - 1)], residue, [&](int l) { return base.colour(l); }),
                    "repetition " + std::to_string(q) + " has a clique in colour " + std::to_string(s));
            }
            for (int b = 2; b <= options.usefulness.max_rainbow && refinement.empty() && ! result.unsatisfiable; ++b) {
                auto compound = template_compound(candidate, rainbow(b));
                vector<int> bounds = plain;
                bounds.resize(bounds.size() + static_cast<std::size_t>(b - 1), 3);
                auto report = ramsey_check(compound, ParameterVector{bounds});
                if (report.passes)
                    continue;
                Colour s = report.failing_colours().front();
                add(violation_clause(instance, report.witness[static_cast<std::size_t>(s - 1)], residue, [&](int l) { return base.colour(l); }),
                    "compound with rainbow order " + std::to_string(b) + " has a clique in colour " + std::to_string(s));
            }
            if (refinement.empty() && ! result.unsatisfiable) {
                note("validated template of order " + std::to_string(candidate.order()) + " with phi " + std::to_string(candidate.phi()));
                result.found = std::move(candidate);
                return result;
            }
        }
        if (result.unsatisfiable)
            return result;
        if (refinement.empty())
            refinement = blocking_clause(instance, base);
        instance.clauses.push_back(std::move(refinement));
    }
    result.log.push_back("iteration limit reached");
    return result;
}

}
