#include <ramsey/ledger.hpp>
#include <ramsey/templates.hpp>

#include <json.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

using std::optional;
using std::string;
using std::string_view;
using std::uint64_t;
using std::vector;

namespace fs = std::filesystem;

namespace ramsey {

namespace
{
    using Json = nlohmann::ordered_json;

    auto rank(Structure s) -> int { return static_cast<int>(s); }

    auto checked_mul(uint64_t a, uint64_t b) -> optional<uint64_t>
    {
        uint64_t out;
        if (__builtin_mul_overflow(a, b, &out))
            return std::nullopt;
        return out;
    }

    auto checked_add(uint64_t a, uint64_t b) -> optional<uint64_t>
    {
        uint64_t out;
        if (__builtin_add_overflow(a, b, &out))
            return std::nullopt;
        return out;
    }

    auto join(const vector<int> & values, string_view sep = ",") -> string
    {
        string out;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i)
                out += sep;
            out += std::to_string(values[i]);
        }
        return out;
    }

    auto sorted_params(const BoundFact & f) -> vector<int>
    {
        auto p = f.params;
        std::sort(p.begin(), p.end());
        return p;
    }

    auto is_diagonal(const BoundFact & f) -> bool
    {
        return ! f.params.empty() && std::all_of(f.params.begin(), f.params.end(), [&](int k) { return k == f.params[0]; });
    }

    // Claim equality: everything except id and note.
    auto same_claim(const BoundFact & a, const BoundFact & b) -> bool
    {
        return a.kind == b.kind && a.params == b.params && a.value == b.value && a.gamma == b.gamma && a.structure == b.structure
            && a.template_phi == b.template_phi && a.regular_degree == b.regular_degree && a.certificate == b.certificate;
    }

    // g is at least as strong as f for every purpose the rules use.
    auto covers(const BoundFact & g, const BoundFact & f) -> bool
    {
        if (g.kind != f.kind || g.params != f.params)
            return false;
        switch (f.kind) {
            case FactKind::gamma_lower_bound:
                return *g.gamma >= *f.gamma;
            case FactKind::ramsey_lower_bound:
                return g.value >= f.value;
            case FactKind::graph_exists:
                break;
        }
        if (g.value < f.value || rank(g.structure) < rank(f.structure))
            return false;
        if (f.is_template() && ! (g.is_template() && *g.template_phi >= *f.template_phi))
            return false;
        for (const auto & [index, degree] : f.regular_degree) {
            auto it = g.regular_degree.find(index);
            if (it == g.regular_degree.end() || it->second != degree)
                return false;
        }
        return true;
    }

    auto derived(FactKind kind, vector<int> params, uint64_t value, Structure structure, int rule, vector<FactId> parents) -> BoundFact
    {
        BoundFact f;
        f.kind = kind;
        f.params = std::move(params);
        f.value = value;
        f.structure = structure;
        f.certificate.type = Certificate::Type::derived;
        f.certificate.rule = rule_id(rule);
        f.certificate.parents = std::move(parents);
        return f;
    }

    auto product_order(uint64_t m, uint64_t n) -> optional<uint64_t>
    {
        auto p = checked_mul(2 * m - 1, 2 * n - 1);
        if (! p)
            return std::nullopt;
        return (*p + 1) / 2;
    }

    auto concat(vector<int> a, const vector<int> & b) -> vector<int>
    {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }

    // Candidate outputs of one rule. Unary rules read `a`; binary rules read
    // (a, b) in that orientation. R1 uses `ks` for the appended bound.
    auto apply_rule(int rule, const BoundFact & a, const BoundFact * b, const vector<int> & ks) -> vector<BoundFact>
    {
        vector<BoundFact> out;
        const bool graph_a = a.kind == FactKind::graph_exists;
        switch (rule) {
            case 1:
                if (graph_a && a.structure == Structure::cyclic && a.params.size() >= 2)
                    for (int k : ks)
                        if (auto v = checked_mul(static_cast<uint64_t>(2 * k - 3), a.value)) {
                            auto f = derived(FactKind::graph_exists, concat(sorted_params(a), {k}), *v, Structure::cyclic, 1, {a.id});
                            f.certificate.argument = k;
                            f.note = "formula-level";
                            out.push_back(std::move(f));
                        }
                break;
            case 2:
            case 3:
            case 4: {
                if (! b || ! graph_a || b->kind != FactKind::graph_exists)
                    break;
                if (rank(a.structure) < rank(Structure::linear) || rank(b->structure) < rank(Structure::linear))
                    break;
                if (rule == 4 && ! (a.structure == Structure::cyclic && b->structure == Structure::cyclic))
                    break;
                if (rule == 2 && ! (is_diagonal(a) && is_diagonal(*b) && a.params[0] == b->params[0]))
                    break;
                if (auto v = product_order(a.value, b->value))
                    out.push_back(derived(FactKind::graph_exists, concat(sorted_params(a), sorted_params(*b)), *v,
                        rule == 4 ? Structure::cyclic : Structure::linear, rule, {a.id, b->id}));
                break;
            }
            case 5: {
                if (! b || ! graph_a || ! a.is_template() || b->kind != FactKind::graph_exists || rank(b->structure) < rank(Structure::linear))
                    break;
                vector<int> plain(a.params.begin(), a.params.end() - 1);
                auto v = checked_mul(a.value - 1, b->value - 1);
                if (v && (v = checked_add(*v, 1 + static_cast<uint64_t>(*a.template_phi))))
                    out.push_back(derived(FactKind::graph_exists, concat(plain, sorted_params(*b)), *v, Structure::linear, 5, {a.id, b->id}));
                break;
            }
            case 6: {
                if (! b || ! graph_a || b->kind != FactKind::graph_exists || a.params.size() != b->params.size())
                    break;
                auto p = sorted_params(a), q = sorted_params(*b);
                vector<int> k(p.size());
                for (std::size_t i = 0; i < p.size(); ++i)
                    k[i] = (p[i] - 1) * (q[i] - 1) + 1;
                if (auto v = checked_mul(a.value, b->value))
                    out.push_back(derived(FactKind::graph_exists, k, *v, Structure::general, 6, {a.id, b->id}));
                break;
            }
            case 7:
                if (graph_a)
                    out.push_back(derived(FactKind::ramsey_lower_bound, sorted_params(a), a.value + 1, Structure::general, 7, {a.id}));
                break;
            case 8: {
                if (! graph_a || a.params.size() < 3)
                    break;
                optional<std::size_t> pick;
                for (std::size_t i = 0; i < a.params.size(); ++i)
                    if (a.params[i] == 3 && (! pick || (! a.regular_degree.contains(static_cast<int>(*pick)) && a.regular_degree.contains(static_cast<int>(i)))))
                        pick = i;
                if (! pick)
                    break;
                auto v = checked_mul(a.value, 16);
                if (! v)
                    break;
                vector<int> k = a.params;
                for (std::size_t i = 0; i < k.size(); ++i)
                    k[i] = i == *pick ? 9 : k[i] + 1;
                auto f = derived(FactKind::graph_exists, k, *v, Structure::general, 8, {a.id});
                if (auto it = a.regular_degree.find(static_cast<int>(*pick)); it != a.regular_degree.end()) {
                    auto d = checked_mul(it->second, 9);
                    auto n7 = checked_mul(a.value, 7);
                    if (d && n7 && (d = checked_add(*d, *n7)) && (d = checked_add(*d, 5)))
                        f.regular_degree[static_cast<int>(*pick)] = *d;
                }
                out.push_back(std::move(f));
                break;
            }
            case 9:
                if (graph_a)
                    for (const auto & [index, degree] : a.regular_degree) {
                        // A bound of 3 would fall to 2 and drop the colour.
                        if (a.params[static_cast<std::size_t>(index)] < 4 || degree < 1)
                            continue;
                        vector<int> k = a.params;
                        --k[static_cast<std::size_t>(index)];
                        out.push_back(derived(FactKind::graph_exists, k, degree, Structure::general, 9, {a.id}));
                    }
                break;
            case 10: {
                if (! graph_a || ! a.is_template() || a.params.size() < 2 || a.params.back() != 3)
                    break;
                vector<int> plain(a.params.begin(), a.params.end() - 1);
                if (! std::all_of(plain.begin(), plain.end(), [&](int k) { return k == plain[0]; }))
                    break;
                auto f = derived(FactKind::gamma_lower_bound, {plain[0]}, 0, Structure::general, 10, {a.id});
                f.gamma = Radical::integer_root(BigInt{a.value - 1}, static_cast<unsigned>(plain.size()));
                out.push_back(std::move(f));
                break;
            }
            case 11:
                if (a.kind == FactKind::ramsey_lower_bound && std::all_of(a.params.begin(), a.params.end(), [](int k) { return k == 3; })) {
                    auto sq = checked_mul(a.value - 1, a.value - 1);
                    if (sq && (sq = checked_add(*sq, 1)))
                        out.push_back(derived(FactKind::ramsey_lower_bound, vector<int>(a.params.size(), 5), *sq, Structure::general, 11, {a.id}));
                }
                else if (a.kind == FactKind::gamma_lower_bound && a.params == vector<int>{3}) {
                    auto f = derived(FactKind::gamma_lower_bound, {5}, 0, Structure::general, 11, {a.id});
                    f.gamma = a.gamma->pow(2);
                    out.push_back(std::move(f));
                }
                break;
            default:
                throw InvariantError("unknown rule " + std::to_string(rule));
        }
        for (auto & f : out)
            canonicalise(f);
        return out;
    }

    auto is_binary(int rule) -> bool { return rule >= 2 && rule <= 6; }

    auto within_caps(const BoundFact & f, const ClosureOptions & o) -> bool
    {
        if (f.params.empty() || static_cast<int>(f.params.size()) > o.max_colours)
            return false;
        if (std::any_of(f.params.begin(), f.params.end(), [&](int k) { return k > o.max_k; }))
            return false;
        return f.kind == FactKind::gamma_lower_bound || f.value <= o.max_value;
    }

    auto resolve(const fs::path & reference, const fs::path & base_dir) -> fs::path
    {
        if (reference.is_relative() && ! base_dir.empty())
            return base_dir / reference;
        return reference;
    }

    auto kind_from(string_view name) -> FactKind
    {
        for (auto k : {FactKind::graph_exists, FactKind::ramsey_lower_bound, FactKind::gamma_lower_bound})
            if (fact_kind_name(k) == name)
                return k;
        throw ParseError("$.kind", "unknown fact kind '" + string(name) + "'");
    }

    auto structure_from(string_view name) -> Structure
    {
        for (auto s : {Structure::general, Structure::linear, Structure::cyclic})
            if (structure_name(s) == name)
                return s;
        throw ParseError("$.structure", "unknown structure '" + string(name) + "'");
    }

    auto describe_certificate(const BoundFact & f) -> string
    {
        const auto & c = f.certificate;
        switch (c.type) {
            case Certificate::Type::explicit_file:
                return "explicit " + c.file + (c.verified ? ", verified" : ", unverified");
            case Certificate::Type::asserted:
                return "asserted: " + c.source;
            case Certificate::Type::derived: {
                string out = "derived " + c.rule + " from";
                for (std::size_t i = 0; i < c.parents.size(); ++i)
                    out += (i ? ", #" : " #") + std::to_string(c.parents[i]);
                if (c.argument)
                    out += " with k=" + std::to_string(*c.argument);
                return out;
            }
        }
        return {};
    }
}

auto fact_kind_name(FactKind kind) -> string_view
{
    switch (kind) {
        case FactKind::graph_exists: return "graph_exists";
        case FactKind::ramsey_lower_bound: return "ramsey_lower_bound";
        case FactKind::gamma_lower_bound: return "gamma_lower_bound";
    }
    return "?";
}

auto structure_name(Structure s) -> string_view
{
    switch (s) {
        case Structure::general: return "general";
        case Structure::linear: return "linear";
        case Structure::cyclic: return "cyclic";
    }
    return "?";
}

auto rule_id(int rule) -> string
{
    return "R" + std::to_string(rule);
}

auto parse_rules(string_view text) -> std::set<int>
{
    std::set<int> rules;
    std::stringstream in{string(text)};
    string item;
    while (std::getline(in, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (item.empty())
            continue;
        if (item[0] == 'r' || item[0] == 'R')
            item.erase(0, 1);
        int rule = 0;
        try {
            rule = std::stoi(item);
        }
        catch (const std::exception &) {
            throw ParseError("rules", "not a rule id: '" + item + "'");
        }
        if (rule < 1 || rule > rule_count)
            throw ParseError("rules", "no rule R" + item);
        rules.insert(rule);
    }
    return rules;
}

auto BoundFact::same_content(const BoundFact & other) const -> bool
{
    return same_claim(*this, other) && note == other.note;
}

auto BoundFact::describe() const -> string
{
    switch (kind) {
        case FactKind::gamma_lower_bound:
            return "Gamma(" + std::to_string(params.at(0)) + ") >= " + gamma->render();
        case FactKind::ramsey_lower_bound:
            return "R(" + join(params) + ") >= " + std::to_string(value);
        case FactKind::graph_exists:
            break;
    }
    string out = (is_template() ? "template (" : "graph (") + join(params) + ";" + std::to_string(value) + ")";
    out += " ";
    out += structure_name(structure);
    if (is_template())
        out += ", phi=" + std::to_string(*template_phi);
    for (const auto & [index, degree] : regular_degree)
        out += ", degree " + std::to_string(degree) + " in colour " + std::to_string(index + 1);
    return out;
}

auto BoundFact::status_marker() const -> char
{
    switch (certificate.type) {
        case Certificate::Type::explicit_file: return 'E';
        case Certificate::Type::asserted: return 'A';
        case Certificate::Type::derived: return 'D';
    }
    return '?';
}

void canonicalise(BoundFact & fact)
{
    if (fact.kind == FactKind::gamma_lower_bound)
        return;
    struct Slot
    {
        int k;
        int original;
        bool is_template;
    };
    vector<Slot> slots;
    for (std::size_t i = 0; i < fact.params.size(); ++i) {
        bool last_template = fact.is_template() && i + 1 == fact.params.size();
        if (fact.params[i] == 2 && ! last_template)
            continue;
        slots.push_back({fact.params[i], static_cast<int>(i), last_template});
    }
    std::stable_sort(slots.begin(), slots.end(), [](const Slot & a, const Slot & b) {
        if (a.is_template != b.is_template)
            return b.is_template;
        return a.k < b.k;
    });
    vector<int> params;
    std::map<int, uint64_t> degrees;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        params.push_back(slots[i].k);
        if (auto it = fact.regular_degree.find(slots[i].original); it != fact.regular_degree.end())
            degrees[static_cast<int>(i)] = it->second;
    }
    fact.params = std::move(params);
    fact.regular_degree = std::move(degrees);
}

auto fact_to_json(const BoundFact & f) -> string
{
    Json j;
    j["id"] = f.id;
    j["kind"] = fact_kind_name(f.kind);
    j["params"] = f.params;
    if (f.kind == FactKind::gamma_lower_bound)
        j["gamma"] = f.gamma->to_string();
    else
        j["value"] = f.value;
    if (f.kind == FactKind::graph_exists)
        j["structure"] = structure_name(f.structure);
    if (f.template_phi)
        j["template_phi"] = *f.template_phi;
    if (! f.regular_degree.empty()) {
        Json degrees = Json::array();
        for (const auto & [index, degree] : f.regular_degree)
            degrees.push_back({index, degree});
        j["regular_degree"] = degrees;
    }
    Json c;
    switch (f.certificate.type) {
        case Certificate::Type::explicit_file:
            c["type"] = "explicit";
            c["file"] = f.certificate.file;
            c["verified"] = f.certificate.verified;
            break;
        case Certificate::Type::asserted:
            c["type"] = "asserted";
            c["source"] = f.certificate.source;
            break;
        case Certificate::Type::derived:
            c["type"] = "derived";
            c["rule"] = f.certificate.rule;
            c["parents"] = f.certificate.parents;
            if (f.certificate.argument)
                c["argument"] = *f.certificate.argument;
            break;
    }
    j["certificate"] = c;
    if (! f.note.empty())
        j["note"] = f.note;
    return j.dump();
}

auto fact_from_json(string_view line) -> BoundFact
{
    Json j;
    try {
        j = Json::parse(line);
    }
    catch (const Json::exception & e) {
        throw ParseError("$", e.what());
    }
    if (! j.is_object())
        throw ParseError("$", "fact record must be an object");
    static const std::set<string> known{"id", "kind", "params", "gamma", "value", "structure", "template_phi", "regular_degree", "certificate", "note"};
    for (const auto & [key, _] : j.items())
        if (! known.contains(key))
            throw ParseError("$." + key, "unknown field");

    BoundFact f;
    try {
        f.id = j.value("id", FactId{0});
        f.kind = kind_from(j.at("kind").get<string>());
        f.params = j.at("params").get<vector<int>>();
        if (f.kind == FactKind::gamma_lower_bound)
            f.gamma = Radical::parse(j.at("gamma").get<string>());
        else
            f.value = j.at("value").get<uint64_t>();
        if (j.contains("structure"))
            f.structure = structure_from(j["structure"].get<string>());
        if (j.contains("template_phi"))
            f.template_phi = j["template_phi"].get<int>();
        if (j.contains("regular_degree"))
            for (const auto & pair : j["regular_degree"])
                f.regular_degree[pair.at(0).get<int>()] = pair.at(1).get<uint64_t>();
        const auto & c = j.at("certificate");
        auto type = c.at("type").get<string>();
        if (type == "explicit") {
            f.certificate.type = Certificate::Type::explicit_file;
            f.certificate.file = c.at("file").get<string>();
            f.certificate.verified = c.value("verified", false);
        }
        else if (type == "asserted") {
            f.certificate.type = Certificate::Type::asserted;
            f.certificate.source = c.at("source").get<string>();
        }
        else if (type == "derived") {
            f.certificate.type = Certificate::Type::derived;
            f.certificate.rule = c.at("rule").get<string>();
            f.certificate.parents = c.at("parents").get<vector<FactId>>();
            if (c.contains("argument"))
                f.certificate.argument = c["argument"].get<int>();
        }
        else
            throw ParseError("$.certificate.type", "unknown certificate type '" + type + "'");
        f.note = j.value("note", string{});
    }
    catch (const Json::exception & e) {
        throw ParseError("$", e.what());
    }
    return f;
}

auto parse_query(string_view text) -> Query
{
    Query q;
    string s{text};
    s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
    auto strip = [&](string_view prefix) {
        if (s.starts_with(prefix) && s.ends_with(")")) {
            s = s.substr(prefix.size(), s.size() - prefix.size() - 1);
            return true;
        }
        return false;
    };
    if (strip("Gamma(") || strip("gamma(") || strip("Γ("))
        q.kind = FactKind::gamma_lower_bound;
    else if (strip("graph(") || strip("L("))
        q.kind = FactKind::graph_exists;
    else
        strip("R(");
    for (int k : ParameterVector::parse(s))
        if (k != 2 || q.kind == FactKind::gamma_lower_bound)
            q.params.push_back(k);
    std::sort(q.params.begin(), q.params.end());
    if (q.kind == FactKind::gamma_lower_bound && q.params.size() != 1)
        throw ParseError("query", "Gamma takes a single k");
    if (q.params.empty())
        throw ParseError("query", "no parameters above 2");
    return q;
}

auto Ledger::fact(FactId id) const -> const BoundFact &
{
    if (id < 1 || id > static_cast<FactId>(_facts.size()))
        throw NotFound("no fact #" + std::to_string(id));
    return _facts[static_cast<std::size_t>(id - 1)];
}

auto Ledger::push(BoundFact fact) -> FactId
{
    fact.id = static_cast<FactId>(_facts.size()) + 1;
    _by_key[{fact.kind, fact.params}].push_back(fact.id);
    _facts.push_back(std::move(fact));
    return _facts.back().id;
}

auto Ledger::dominated(const BoundFact & candidate) const -> bool
{
    auto it = _by_key.find({candidate.kind, candidate.params});
    if (it == _by_key.end())
        return false;
    return std::any_of(it->second.begin(), it->second.end(), [&](FactId id) { return covers(fact(id), candidate); });
}

auto Ledger::recompute_matches(const BoundFact & f, const ClosureOptions &) const -> bool
{
    const auto & c = f.certificate;
    if (c.rule.size() < 2 || c.rule[0] != 'R')
        return false;
    int rule = 0;
    try {
        rule = std::stoi(c.rule.substr(1));
    }
    catch (const std::exception &) {
        return false;
    }
    if (rule < 1 || rule > rule_count || c.parents.size() != (is_binary(rule) ? 2U : 1U))
        return false;
    for (FactId p : c.parents)
        if (p < 1 || p >= f.id || p > static_cast<FactId>(_facts.size()))
            return false;
    vector<int> ks;
    if (c.argument)
        ks.push_back(*c.argument);
    const auto & a = fact(c.parents[0]);
    const BoundFact * b = is_binary(rule) ? &fact(c.parents[1]) : nullptr;
    auto candidates = apply_rule(rule, a, b, ks);
    return std::any_of(candidates.begin(), candidates.end(), [&](const BoundFact & g) { return same_claim(g, f); });
}

auto explicit_fact(const fs::path & reference, const fs::path & base_dir) -> BoundFact
{
    auto doc = load_colouring(resolve(reference, base_dir));
    if (! doc.avoid)
        throw ParseError("$.avoid", "an explicit fact needs the colouring's avoid vector");
    auto report = ramsey_check(doc, *doc.avoid);
    if (! report.passes) {
        string colours;
        for (Colour s : report.failing_colours())
            colours += (colours.empty() ? "" : ",") + std::to_string(s);
        throw RejectedFact(reference.generic_string() + " fails " + doc.avoid->to_string() + " in colour(s) " + colours, report);
    }

    BoundFact f;
    f.kind = FactKind::graph_exists;
    f.params = doc.avoid->values();
    f.value = static_cast<uint64_t>(doc.order());
    f.certificate.type = Certificate::Type::explicit_file;
    f.certificate.file = reference.generic_string();
    f.certificate.verified = true;
    f.note = doc.comment;

    if (auto * c = std::get_if<LengthColouring>(&doc.body)) {
        f.structure = c->is_cyclic() || check_cyclic_symmetry(*c) ? Structure::cyclic : Structure::linear;
        int r = c->num_colours();
        if (doc.template_colour == r && doc.avoid->values().back() == 3 && is_tf_template(*c, r)) {
            TemplateGraph t{c->to_linear()};
            vector<int> plain(f.params.begin(), f.params.end() - 1);
            if (check_usefulness(t, ParameterVector{plain}).passes())
                f.template_phi = t.phi();
        }
    }
    auto g = doc.explicit_form();
    for (Colour s = 1; s <= g.num_colours() && s <= static_cast<int>(f.params.size()); ++s)
        if (auto d = regular_colour_degree(g, s))
            f.regular_degree[s - 1] = static_cast<uint64_t>(*d);
    canonicalise(f);
    return f;
}

auto Ledger::add_fact(BoundFact f, const fs::path & base_dir) -> FactId
{
    canonicalise(f);
    auto reject = [&](const string & why) -> FactId { throw InvariantError("fact rejected: " + why); };

    if (f.kind == FactKind::gamma_lower_bound) {
        if (f.params.size() != 1 || f.params[0] < 3 || ! f.gamma)
            return reject("a gamma fact needs one k >= 3 and a value");
        if (f.template_phi || ! f.regular_degree.empty())
            return reject("a gamma fact carries no graph flags");
    }
    else {
        if (f.params.empty())
            return reject("no clique bound above 2");
        if (f.value < 1)
            return reject("value must be positive");
        if (f.gamma)
            return reject("only gamma facts carry a radical");
    }
    if (f.is_template()) {
        if (f.kind != FactKind::graph_exists || f.params.back() != 3 || *f.template_phi < 0 || static_cast<uint64_t>(*f.template_phi) >= f.value)
            return reject("a template is a graph with template bound 3 and 0 <= phi < order");
    }
    for (const auto & [index, degree] : f.regular_degree)
        if (f.kind != FactKind::graph_exists || index < 0 || index >= static_cast<int>(f.params.size()) || degree >= f.value)
            return reject("degree entry out of range");

    for (const auto & existing : _facts)
        if (existing.same_content(f))
            return existing.id;

    f.id = static_cast<FactId>(_facts.size()) + 1;
    switch (f.certificate.type) {
        case Certificate::Type::asserted:
            if (f.certificate.source.empty())
                return reject("asserted facts need a source");
            break;
        case Certificate::Type::derived:
            if (! recompute_matches(f, {}))
                return reject("derived fact does not follow from its parents by " + f.certificate.rule);
            break;
        case Certificate::Type::explicit_file: {
            auto check = explicit_fact(f.certificate.file, base_dir);
            if (check.params != f.params || check.value != f.value || rank(check.structure) < rank(f.structure))
                return reject(f.certificate.file + " does not certify " + f.describe());
            f.certificate.verified = true;
            break;
        }
    }
    return push(std::move(f));
}

auto Ledger::add_explicit(const fs::path & reference, const fs::path & base_dir) -> FactId
{
    auto f = explicit_fact(reference, base_dir);
    for (const auto & existing : _facts)
        if (existing.same_content(f))
            return existing.id;
    return push(std::move(f));
}

auto Ledger::derive_closure(const ClosureOptions & options) -> vector<FactId>
{
    vector<FactId> added;
    vector<int> ks;
    for (int k = 3; k <= options.max_k; ++k)
        ks.push_back(k);

    for (int pass = 0; pass < options.depth; ++pass) {
        // Facts superseded by another fact of the same key take no part.
        vector<const BoundFact *> active;
        for (const auto & f : _facts) {
            const auto & peers = _by_key.at({f.kind, f.params});
            bool superseded = std::any_of(peers.begin(), peers.end(), [&](FactId id) {
                const auto & g = fact(id);
                return id != f.id && covers(g, f) && (! covers(f, g) || id < f.id);
            });
            if (! superseded)
                active.push_back(&f);
        }
        vector<BoundFact> snapshot;
        for (const auto * f : active)
            snapshot.push_back(*f);

        std::size_t before = _facts.size();
        auto offer = [&](vector<BoundFact> candidates) {
            for (auto & c : candidates)
                if (within_caps(c, options) && ! dominated(c))
                    added.push_back(push(std::move(c)));
        };

        for (const auto & a : snapshot)
            for (int rule : {1, 7, 8, 9, 10, 11})
                if (options.rules.contains(rule))
                    offer(apply_rule(rule, a, nullptr, ks));

        for (std::size_t i = 0; i < snapshot.size(); ++i) {
            const auto & a = snapshot[i];
            if (a.kind != FactKind::graph_exists)
                continue;
            for (std::size_t j = i; j < snapshot.size(); ++j) {
                const auto & b = snapshot[j];
                if (b.kind != FactKind::graph_exists)
                    continue;
                for (int rule : {4, 2, 3}) {
                    if (! options.rules.contains(rule))
                        continue;
                    auto out = apply_rule(rule, a, &b, ks);
                    if (! out.empty()) {
                        offer(std::move(out));
                        break;
                    }
                }
                if (options.rules.contains(5)) {
                    offer(apply_rule(5, a, &b, ks));
                    if (j != i)
                        offer(apply_rule(5, b, &a, ks));
                }
                if (options.rules.contains(6))
                    offer(apply_rule(6, a, &b, ks));
            }
        }
        if (_facts.size() == before)
            break;
    }
    return added;
}

auto Ledger::best_bound(const Query & query) const -> BoundFact
{
    const BoundFact * best = nullptr;
    auto better = [&](const BoundFact & f) {
        if (! best)
            return true;
        if (query.kind == FactKind::gamma_lower_bound)
            return *f.gamma > *best->gamma;
        if (f.value != best->value)
            return f.value > best->value;
        return rank(f.structure) > rank(best->structure);
    };
    const BoundFact * best_graph = nullptr;
    for (const auto & f : _facts) {
        if (sorted_params(f) != query.params)
            continue;
        if (f.kind == query.kind && better(f))
            best = &f;
        if (f.kind == FactKind::graph_exists && (! best_graph || f.value > best_graph->value))
            best_graph = &f;
    }
    if (query.kind == FactKind::ramsey_lower_bound && best_graph && (! best || best_graph->value + 1 > best->value)) {
        auto lifted = apply_rule(7, *best_graph, nullptr, {});
        return lifted.front();
    }
    if (! best) {
        string what = query.kind == FactKind::gamma_lower_bound ? "Gamma(" + join(query.params) + ")" : "(" + join(query.params) + ")";
        throw NotFound("no fact matches " + what);
    }
    return *best;
}

auto Ledger::provenance(const BoundFact & f) const -> string
{
    std::ostringstream out;
    std::function<void(const BoundFact &, int)> walk = [&](const BoundFact & g, int depth) {
        out << string(static_cast<std::size_t>(2 * depth), ' ');
        if (g.id > 0)
            out << '#' << g.id << ' ';
        out << g.describe() << "  [" << describe_certificate(g) << "]";
        if (! g.note.empty())
            out << "  (" << g.note << ")";
        out << '\n';
        vector<FactId> seen;
        for (FactId p : g.certificate.parents) {
            if (std::find(seen.begin(), seen.end(), p) != seen.end())
                continue;
            seen.push_back(p);
            walk(fact(p), depth + 1);
        }
    };
    walk(f, 0);
    return out.str();
}

auto Ledger::chain_rules(const BoundFact & f) const -> vector<string>
{
    vector<string> rules;
    std::function<void(const BoundFact &)> walk = [&](const BoundFact & g) {
        for (FactId p : g.certificate.parents)
            walk(fact(p));
        if (g.certificate.type == Certificate::Type::derived && std::find(rules.begin(), rules.end(), g.certificate.rule) == rules.end())
            rules.push_back(g.certificate.rule);
    };
    walk(f);
    return rules;
}

auto Ledger::emit_table(const TableRange & range, TableFormat format) const -> string
{
    std::ostringstream out;
    const bool md = format == TableFormat::markdown;
    auto rule_list = [&](const BoundFact & f) {
        string rules;
        for (const auto & rule : chain_rules(f))
            rules += (rules.empty() ? "" : " ") + rule;
        return rules;
    };
    auto cell = [](const BoundFact & f) { return std::to_string(f.value) + " " + f.status_marker(); };
    auto try_best = [&](const Query & q) -> optional<BoundFact> {
        try {
            return best_bound(q);
        }
        catch (const NotFound &) {
            return std::nullopt;
        }
    };

    if (md) {
        out << "## Highest known graph orders, diagonal parameters\n\n| k \\ r |";
        for (int r = range.r_min; r <= range.r_max; ++r)
            out << " " << r << " |";
        out << "\n|---|";
        for (int r = range.r_min; r <= range.r_max; ++r)
            out << "---|";
        out << '\n';
    }
    else
        out << "kind,parameters,value,status,rules\n";

    for (int k = range.k_min; k <= range.k_max; ++k) {
        vector<optional<BoundFact>> row;
        bool any = false;
        for (int r = range.r_min; r <= range.r_max; ++r) {
            row.push_back(try_best({FactKind::graph_exists, vector<int>(static_cast<std::size_t>(r), k)}));
            any = any || row.back().has_value();
        }
        if (! any)
            continue;
        if (md) {
            out << "| " << k << " |";
            for (const auto & c : row)
                out << " " << (c ? cell(*c) : string{"-"}) << " |";
            out << '\n';
        }
        else
            for (const auto & c : row)
                if (c)
                    out << "graph,\"" << join(c->params) << "\"," << c->value << ',' << c->status_marker() << ",\"" << rule_list(*c) << "\"\n";
    }

    // Every parameter set in range that some fact speaks to.
    std::set<std::pair<std::size_t, vector<int>>> keys;
    for (const auto & f : _facts) {
        if (f.kind == FactKind::gamma_lower_bound)
            continue;
        auto p = sorted_params(f);
        auto r = static_cast<int>(p.size());
        if (r < range.r_min || r > range.r_max || p.front() < range.k_min || p.back() > range.k_max)
            continue;
        keys.insert({p.size(), p});
    }
    if (md)
        out << "\n## Ramsey lower bounds\n\n| parameters | lower bound | status | rules |\n|---|---|---|---|\n";
    for (const auto & [_, p] : keys) {
        auto best = best_bound({FactKind::ramsey_lower_bound, p});
        auto rules = rule_list(best);
        if (md)
            out << "| R(" << join(p) << ") | " << best.value << " | " << best.status_marker() << " | " << (rules.empty() ? "-" : rules) << " |\n";
        else
            out << "ramsey,\"" << join(p) << "\"," << best.value << ',' << best.status_marker() << ",\"" << rules << "\"\n";
    }

    if (md)
        out << "\n## Gamma lower bounds\n\n| k | lower bound | status | rules |\n|---|---|---|---|\n";
    for (int k = range.k_min; k <= range.k_max; ++k) {
        auto best = try_best({FactKind::gamma_lower_bound, {k}});
        if (! best)
            continue;
        auto rules = rule_list(*best);
        if (md)
            out << "| " << k << " | " << best->gamma->render() << " | " << best->status_marker() << " | " << (rules.empty() ? "-" : rules) << " |\n";
        else
            out << "gamma,\"" << k << "\"," << best->gamma->render() << ',' << best->status_marker() << ",\"" << rules << "\"\n";
    }
    if (md)
        out << "\nE explicit verified colouring, A asserted, D derived.\n";
    return out.str();
}

auto Ledger::audit(const fs::path & base_dir, bool reverify_files) const -> vector<string>
{
    vector<string> problems;
    for (const auto & f : _facts) {
        auto where = "#" + std::to_string(f.id) + " " + f.describe() + ": ";
        switch (f.certificate.type) {
            case Certificate::Type::derived:
                if (! recompute_matches(f, {}))
                    problems.push_back(where + "does not follow from its parents by " + f.certificate.rule);
                break;
            case Certificate::Type::explicit_file:
                if (! reverify_files)
                    break;
                try {
                    auto check = explicit_fact(f.certificate.file, base_dir);
                    if (check.params != f.params || check.value != f.value)
                        problems.push_back(where + f.certificate.file + " certifies " + check.describe() + " instead");
                }
                catch (const Error & e) {
                    problems.push_back(where + e.what());
                }
                break;
            case Certificate::Type::asserted:
                break;
        }
    }
    return problems;
}

auto Ledger::serialize(FactId after) const -> string
{
    string out;
    for (const auto & f : _facts)
        if (f.id > after)
            out += fact_to_json(f) + "\n";
    return out;
}

auto Ledger::parse(string_view text) -> Ledger
{
    Ledger ledger;
    std::istringstream in{string(text)};
    string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line[0] == '#')
            continue;
        BoundFact f;
        try {
            f = fact_from_json(line);
        }
        catch (const ParseError & e) {
            throw ParseError("line " + std::to_string(number) + " " + e.path(), e.what());
        }
        auto expected = static_cast<FactId>(ledger._facts.size()) + 1;
        if (f.id != 0 && f.id != expected)
            throw ParseError("line " + std::to_string(number), "fact id " + std::to_string(f.id) + " out of sequence, expected " + std::to_string(expected));
        auto given = f.params;
        canonicalise(f);
        if (f.params != given)
            throw ParseError("line " + std::to_string(number), "parameters not in canonical order");
        if (f.certificate.type == Certificate::Type::derived) {
            f.id = expected;
            if (! ledger.recompute_matches(f, {}))
                throw ParseError("line " + std::to_string(number), "derived fact does not follow from its parents");
        }
        ledger.push(std::move(f));
    }
    return ledger;
}

StoreLock::StoreLock(const fs::path & store)
{
    auto path = store.string() + ".lock";
    _fd = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
    if (_fd < 0)
        throw Error("cannot open lock file " + path);
    if (::flock(_fd, LOCK_EX) != 0) {
        ::close(_fd);
        throw Error("cannot lock " + path);
    }
}

StoreLock::~StoreLock()
{
    if (_fd >= 0) {
        ::flock(_fd, LOCK_UN);
        ::close(_fd);
    }
}

auto load_ledger(const fs::path & store) -> Ledger
{
    if (! fs::exists(store))
        return {};
    return Ledger::parse(read_file(store));
}

void append_facts(const fs::path & store, const Ledger & ledger, FactId after)
{
    auto problems = ledger.audit({}, false);
    if (! problems.empty())
        throw InternalError("provenance check failed: " + problems.front());
    auto text = ledger.serialize(after);
    if (text.empty())
        return;
    std::ofstream out(store, std::ios::app | std::ios::binary);
    if (! out)
        throw Error("cannot append to " + store.string());
    out << text;
    if (! out)
        throw Error("write to " + store.string() + " failed");
}

}
