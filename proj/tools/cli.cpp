#include "cli.hpp"

#include <ramsey/cliques.hpp>
#include <ramsey/colouring.hpp>
#include <ramsey/constructions.hpp>
#include <ramsey/error.hpp>
#include <ramsey/ledger.hpp>
#include <ramsey/sat.hpp>
#include <ramsey/templates.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

using std::optional;
using std::ostream;
using std::string;
using std::vector;

namespace fs = std::filesystem;

namespace ramsey::cli {

namespace
{
    struct Context
    {
        ostream & out;
        ostream & err;
        fs::path store;
        bool verbose = false;
    };

    class UsageError : public Error
    {
    public:
        using Error::Error;
    };

    auto parse_range(const string & text) -> std::pair<int, int>
    {
        auto dots = text.find("..");
        try {
            if (dots == string::npos) {
                int v = std::stoi(text);
                return {v, v};
            }
            return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
        }
        catch (const std::exception &) {
            throw UsageError("expected a range like 3..6, got '" + text + "'");
        }
    }

    void emit(Context & ctx, const string & path, const string & text)
    {
        if (path.empty() || path == "-")
            ctx.out << text;
        else
            write_file(path, text);
    }

    auto length_body(const ColouringDocument & doc, const string & what) -> const LengthColouring &
    {
        if (auto * c = std::get_if<LengthColouring>(&doc.body))
            return *c;
        throw UsageError(what + " must be a linear or cyclic colouring");
    }

    auto avoid_of(const ColouringDocument & doc, const string & override_text, const string & what) -> ParameterVector
    {
        if (! override_text.empty())
            return ParameterVector::parse(override_text);
        if (doc.avoid)
            return *doc.avoid;
        throw UsageError(what + " has no avoid vector; pass --avoid");
    }

    auto as_template(const ColouringDocument & doc, const string & what) -> TemplateGraph
    {
        const auto & c = length_body(doc, what);
        Colour s = doc.template_colour.value_or(c.num_colours());
        return TemplateGraph{with_template_colour_last(c.to_linear(), s)};
    }

    auto without_last(const ParameterVector & p) -> ParameterVector
    {
        return ParameterVector{vector<int>(p.begin(), p.end() - 1)};
    }

    void print_report(Context & ctx, const CliqueReport & report, bool witness = false)
    {
        for (std::size_t i = 0; i < report.per_colour_max.size(); ++i) {
            int size = report.per_colour_max[i], bound = report.bounds[i];
            ctx.out << "colour " << i + 1 << ": clique " << (report.exact[i] ? "" : ">= ") << size << (size < bound ? " < " : " >= ") << bound;
            if (size >= bound)
                ctx.out << "  FAIL";
            if (size >= bound || witness) {
                ctx.out << " witness";
                for (int v : report.witness[i])
                    ctx.out << ' ' << v;
            }
            ctx.out << '\n';
        }
        ctx.out << (report.passes ? "PASS" : "FAIL") << '\n';
    }

    // Writes a document after confirming it re-parses to the same colouring.
    void save_checked(Context & ctx, const string & path, const ColouringDocument & doc)
    {
        auto text = serialize_colouring(doc);
        auto again = parse_colouring(text);
        if (again.body != doc.body)
            throw InternalError("serialised colouring does not round-trip");
        emit(ctx, path, text);
    }

    // Exact clique numbers + 1, for constructions without a predicted vector.
    auto measured_avoid(const LengthColouring & c) -> ParameterVector
    {
        vector<int> bounds;
        auto report = ramsey_check(c, ParameterVector{vector<int>(static_cast<std::size_t>(c.num_colours()), 2)}, {.exact = true});
        for (int size : report.per_colour_max)
            bounds.push_back(std::max(size + 1, 2));
        return ParameterVector{bounds};
    }

    auto cmd_verify(Context & ctx, const string & file, const string & avoid_text, bool exact, bool witness, bool oracle, int oracle_cap) -> int
    {
        auto doc = load_colouring(file);
        auto p = avoid_of(doc, avoid_text, file);
        ctx.out << "order " << doc.order() << ", " << doc.num_colours() << " colours, avoid (" << p.to_string() << ")\n";
        auto report = ramsey_check(doc, p, {.exact = exact || oracle});
        print_report(ctx, report, witness);
        if (oracle) {
            auto g = doc.explicit_form();
            for (Colour s = 1; s <= g.num_colours(); ++s) {
                int brute = max_clique_brute(g, s, oracle_cap);
                if (brute != report.per_colour_max[static_cast<std::size_t>(s - 1)])
                    throw InternalError("clique search and brute force disagree in colour " + std::to_string(s));
            }
            ctx.out << "oracle agrees\n";
        }
        return report.passes ? exit_ok : exit_negative;
    }

    auto cmd_construct(Context & ctx, const string & kind, const vector<string> & inputs, const string & out_path, bool minus_one, bool verify) -> int
    {
        auto need = [&](std::size_t n) {
            if (inputs.size() != n)
                throw UsageError("construct " + kind + " takes " + std::to_string(n) + " input(s)");
        };
        auto number = [&](const string & text) {
            try {
                return std::stoi(text);
            }
            catch (const std::exception &) {
                throw UsageError("expected a number, got '" + text + "'");
            }
        };

        ColouringDocument doc{LengthColouring::linear(2, 1, {1}), std::nullopt, std::nullopt, {}};
        if (kind == "product") {
            need(2);
            auto a = load_colouring(inputs[0]), b = load_colouring(inputs[1]);
            const auto & ca = length_body(a, inputs[0]);
            const auto & cb = length_body(b, inputs[1]);
            bool cyclic = check_cyclic_symmetry(ca) && check_cyclic_symmetry(cb);
            doc.body = cyclic ? product_cyclic(to_cyclic(ca).value(), to_cyclic(cb).value()) : product_linear(ca, cb);
            doc.avoid = avoid_of(a, "", inputs[0]).concat(avoid_of(b, "", inputs[1]));
            doc.comment = "product of " + fs::path(inputs[0]).filename().string() + " and " + fs::path(inputs[1]).filename().string();
        }
        else if (kind == "template") {
            need(2);
            auto t = load_colouring(inputs[0]), b = load_colouring(inputs[1]);
            auto tg = as_template(t, inputs[0]);
            doc.body = template_compound(tg, length_body(b, inputs[1]));
            doc.avoid = without_last(avoid_of(t, "", inputs[0])).concat(avoid_of(b, "", inputs[1]));
            doc.comment = "template compound of " + fs::path(inputs[0]).filename().string() + " and " + fs::path(inputs[1]).filename().string();
        }
        else if (kind == "song") {
            need(2);
            auto g = load_colouring(inputs[0]), h = load_colouring(inputs[1]);
            doc.body = song_product(g.explicit_form(), h.explicit_form());
            doc.avoid = song_avoid(avoid_of(g, "", inputs[0]), avoid_of(h, "", inputs[1]));
            doc.comment = "grid product of " + fs::path(inputs[0]).filename().string() + " and " + fs::path(inputs[1]).filename().string();
        }
        else if (kind == "double") {
            need(1);
            auto g = load_colouring(inputs[0]);
            auto t = double_to_template(length_body(g, inputs[0]), minus_one ? DoublingOrder::twice_minus_one : DoublingOrder::twice);
            doc.body = t.base();
            doc.avoid = avoid_of(g, "", inputs[0]).concat(ParameterVector{{3}});
            doc.template_colour = t.template_colour();
            doc.comment = "template from " + fs::path(inputs[0]).filename().string();
        }
        else if (kind == "tile") {
            need(2);
            auto t = load_colouring(inputs[0]);
            auto tiled = tile(as_template(t, inputs[0]), number(inputs[1]));
            // The template colour is unconstrained in a repetition.
            doc.avoid = without_last(avoid_of(t, "", inputs[0])).concat(ParameterVector{{tiled.order() + 1}});
            doc.body = std::move(tiled);
            doc.comment = "template repeated " + inputs[1] + " times";
        }
        else if (kind == "paley") {
            need(1);
            auto c = paley_colouring(number(inputs[0]));
            doc.body = c;
            doc.avoid = measured_avoid(c);
            doc.comment = "quadratic residues modulo " + inputs[0];
        }
        else if (kind == "rainbow") {
            need(1);
            auto c = rainbow(number(inputs[0]));
            doc.body = c;
            doc.avoid = ParameterVector{vector<int>(static_cast<std::size_t>(c.num_colours()), 3)};
        }
        else if (kind == "pentagon") {
            need(0);
            doc.body = pentagon();
            doc.avoid = ParameterVector{{3, 3}};
        }
        else if (kind == "edge") {
            need(0);
            doc.body = single_edge();
            doc.avoid = ParameterVector{{3}};
        }
        else
            throw UsageError("unknown construction '" + kind + "'");

        if (! verify) {
            doc.comment += doc.comment.empty() ? "unverified" : " (unverified)";
            ctx.err << "warning: writing an unverified colouring\n";
            save_checked(ctx, out_path, doc);
            return exit_ok;
        }
        auto report = ramsey_check(doc, *doc.avoid);
        if (! report.passes) {
            ctx.err << "construction does not meet (" << doc.avoid->to_string() << ")\n";
            print_report(ctx, report);
            return exit_negative;
        }
        if (! out_path.empty())
            ctx.out << kind << ": order " << doc.order() << ", avoid (" << doc.avoid->to_string() << ") verified\n";
        save_checked(ctx, out_path, doc);
        return exit_ok;
    }

    auto cmd_encode(Context & ctx, const string & kind, int order, const string & avoid_text, const string & prototype, int width,
        const string & out_path, std::int64_t clause_cap) -> int
    {
        CnfInstance instance;
        if (kind == "cyclic" || kind == "linear") {
            if (order < 1 || avoid_text.empty())
                throw UsageError("encode " + kind + " needs --order and --avoid");
            auto p = ParameterVector::parse(avoid_text);
            instance = kind == "cyclic" ? encode_cyclic(order, p, clause_cap) : encode_linear(order, p, clause_cap);
        }
        else if (kind == "extension") {
            if (prototype.empty() || avoid_text.empty())
                throw UsageError("encode extension needs --prototype, --width and --avoid");
            auto doc = load_colouring(prototype);
            const auto & c = length_body(doc, prototype);
            auto cyclic = to_cyclic(c);
            if (! cyclic)
                throw UsageError(prototype + " is not cyclic");
            instance = encode_extension({*cyclic, width, ParameterVector::parse(avoid_text)}, clause_cap);
        }
        else
            throw UsageError("unknown encoding '" + kind + "'");
        emit(ctx, out_path, write_dimacs(instance));
        if (! out_path.empty())
            ctx.out << "p cnf " << instance.num_vars << ' ' << instance.clauses.size() << " -> " << out_path << '\n';
        return exit_ok;
    }

    auto cmd_solve(Context & ctx, const string & cnf, std::int64_t conflicts, const string & out_path) -> int
    {
        if (conflicts <= 0)
            throw UsageError("--conflicts must be positive");
        auto instance = read_dimacs(read_file(cnf));
        auto result = solve_internal(instance, {conflicts});
        emit(ctx, out_path, format_model(result));
        if (! out_path.empty())
            ctx.out << (result.status == SolveStatus::satisfiable ? "SATISFIABLE" : result.status == SolveStatus::unsatisfiable ? "UNSATISFIABLE" : "UNKNOWN") << '\n';
        return result.status == SolveStatus::satisfiable ? exit_ok : exit_negative;
    }

    auto cmd_decode(Context & ctx, const string & cnf, const string & model, const string & out_path) -> int
    {
        auto instance = read_dimacs(read_file(cnf));
        if (! instance.has_meta)
            throw UsageError(cnf + " carries no colouring metadata");
        auto colouring = parse_model(read_file(model), instance);
        if (! colouring) {
            ctx.out << "UNSATISFIABLE: nothing to decode\n";
            return exit_negative;
        }
        ColouringDocument doc{*colouring, instance.avoid, std::nullopt, "decoded from " + fs::path(cnf).filename().string()};
        if (instance.kind == EncodingKind::extension)
            doc.template_colour = colouring->num_colours();
        auto report = ramsey_check(doc, instance.avoid);
        save_checked(ctx, out_path, doc);
        if (! out_path.empty() || ! report.passes)
            print_report(ctx, report);
        return report.passes ? exit_ok : exit_negative;
    }

    auto cmd_search(Context & ctx, const string & what, const string & prototype, int width, const string & avoid_text, SearchOptions options,
        const string & out_path) -> int
    {
        if (what != "template")
            throw UsageError("only 'search template' is supported");
        if (options.max_iterations <= 0 || options.budget.max_conflicts <= 0)
            throw UsageError("search budgets must be positive");
        auto doc = load_colouring(prototype);
        auto cyclic = to_cyclic(length_body(doc, prototype));
        if (! cyclic)
            throw UsageError(prototype + " is not cyclic");
        auto result = search_template({*cyclic, width, ParameterVector::parse(avoid_text)}, options);
        if (ctx.verbose)
            for (const auto & line : result.log)
                ctx.err << line << '\n';
        if (! result.found) {
            ctx.out << (result.unsatisfiable ? "no template exists for this prototype and width" : "no template found within budget") << " after "
                    << result.iterations << " iteration(s)\n";
            return exit_negative;
        }
        ColouringDocument out{result.found->base(), ParameterVector::parse(avoid_text), result.found->template_colour(), "template from prototype search"};
        ctx.out << "template of order " << result.found->order() << ", phi " << result.found->phi() << " after " << result.iterations << " iteration(s)\n";
        save_checked(ctx, out_path.empty() ? "-" : out_path, out);
        return exit_ok;
    }

    auto cmd_template_check(Context & ctx, const string & file, const string & avoid_text, UsefulnessOptions options) -> int
    {
        auto doc = load_colouring(file);
        auto t = as_template(doc, file);
        auto p = avoid_text.empty() ? without_last(avoid_of(doc, "", file)) : ParameterVector::parse(avoid_text);
        auto report = check_usefulness(t, p, options);
        ctx.out << "order " << t.order() << ", phi " << t.phi() << ", tf-template " << (report.tf_template ? "yes" : "no") << '\n';
        for (std::size_t q = 0; q < report.repetitions.size(); ++q)
            ctx.out << "repeat " << q + 1 << ": " << (report.repetitions[q].passes ? "ok" : "FAIL") << '\n';
        for (std::size_t n = 0; n < report.rainbow_compounds.size(); ++n)
            ctx.out << "rainbow " << n + 2 << ": " << (report.rainbow_compounds[n].passes ? "ok" : "FAIL") << '\n';
        ctx.out << (report.passes() ? "USEFUL" : "NOT USEFUL") << '\n';
        return report.passes() ? exit_ok : exit_negative;
    }

    struct LedgerArgs
    {
        string file, params, source, structure = "general", query, rules, k_range = "3..10", r_range = "1..4", format = "md";
        std::uint64_t order = 0;
        optional<int> phi;
        vector<string> degrees;
        int depth = ClosureOptions{}.depth, max_colours = ClosureOptions{}.max_colours, max_k = ClosureOptions{}.max_k;
        optional<std::uint64_t> at_least;
        string gamma;
    };

    auto store_dir(const Context & ctx) -> fs::path
    {
        auto dir = fs::absolute(ctx.store).parent_path();
        return dir;
    }

    auto cmd_ledger(Context & ctx, const string & op, const LedgerArgs & a) -> int
    {
        StoreLock lock{ctx.store};
        auto ledger = load_ledger(ctx.store);
        auto before = static_cast<FactId>(ledger.size());
        auto base = store_dir(ctx);
        int code = exit_ok;

        if (op == "add") {
            auto reference = fs::relative(fs::absolute(a.file), base);
            try {
                auto id = ledger.add_explicit(reference, base);
                ctx.out << '#' << id << ' ' << ledger.fact(id).describe() << '\n';
            }
            catch (const RejectedFact & e) {
                ctx.out << "rejected: " << e.what() << '\n';
                print_report(ctx, e.report());
                return exit_negative;
            }
        }
        else if (op == "assert") {
            BoundFact f;
            f.certificate.type = Certificate::Type::asserted;
            f.certificate.source = a.source;
            if (! a.gamma.empty()) {
                f.kind = FactKind::gamma_lower_bound;
                f.params = {std::stoi(a.params)};
                f.gamma = a.gamma.find_first_of("/^") == string::npos ? Radical::from_decimal(a.gamma) : Radical::parse(a.gamma);
            }
            else {
                f.params = ParameterVector::parse(a.params).values();
                f.value = a.order;
                if (a.structure == "cyclic")
                    f.structure = Structure::cyclic;
                else if (a.structure == "linear")
                    f.structure = Structure::linear;
                else if (a.structure != "general")
                    throw UsageError("structure is general, linear or cyclic");
                f.template_phi = a.phi;
                for (const auto & d : a.degrees) {
                    auto colon = d.find(':');
                    if (colon == string::npos)
                        throw UsageError("--degree takes colour:degree");
                    f.regular_degree[std::stoi(d.substr(0, colon)) - 1] = std::stoull(d.substr(colon + 1));
                }
            }
            auto id = ledger.add_fact(f, base);
            ctx.out << '#' << id << ' ' << ledger.fact(id).describe() << '\n';
        }
        else if (op == "import") {
            auto pack = Ledger::parse(read_file(a.file));
            for (const auto & f : pack.facts()) {
                if (f.certificate.type == Certificate::Type::derived)
                    throw UsageError("import takes asserted or explicit facts only");
                auto copy = f;
                copy.id = 0;
                auto id = ledger.add_fact(copy, fs::absolute(a.file).parent_path());
                if (id > before)
                    ctx.out << '#' << id << ' ' << ledger.fact(id).describe() << '\n';
            }
        }
        else if (op == "derive") {
            ClosureOptions options;
            if (! a.rules.empty())
                options.rules = parse_rules(a.rules);
            if (a.depth <= 0 || a.max_colours <= 0 || a.max_k <= 0)
                throw UsageError("closure limits must be positive");
            options.depth = a.depth;
            options.max_colours = a.max_colours;
            options.max_k = a.max_k;
            auto added = ledger.derive_closure(options);
            for (FactId id : added)
                if (ctx.verbose)
                    ctx.out << '#' << id << ' ' << ledger.fact(id).describe() << '\n';
            ctx.out << added.size() << " new fact(s)\n";
        }
        else if (op == "best") {
            try {
                auto best = ledger.best_bound(parse_query(a.query));
                ctx.out << ledger.provenance(best);
                if (a.at_least && best.kind != FactKind::gamma_lower_bound && best.value < *a.at_least) {
                    ctx.out << "below the expected " << *a.at_least << '\n';
                    code = exit_negative;
                }
            }
            catch (const NotFound & e) {
                ctx.out << "not found: " << e.what() << '\n';
                return exit_negative;
            }
        }
        else if (op == "table") {
            auto [k_min, k_max] = parse_range(a.k_range);
            auto [r_min, r_max] = parse_range(a.r_range);
            if (a.format != "md" && a.format != "csv")
                throw UsageError("--format is md or csv");
            ctx.out << ledger.emit_table({k_min, k_max, r_min, r_max}, a.format == "md" ? TableFormat::markdown : TableFormat::csv);
        }
        else if (op == "audit") {
            auto problems = ledger.audit(base);
            for (const auto & p : problems)
                ctx.out << p << '\n';
            ctx.out << ledger.size() << " fact(s), " << problems.size() << " problem(s)\n";
            code = problems.empty() ? exit_ok : exit_negative;
        }
        else if (op == "list") {
            for (const auto & f : ledger.facts())
                ctx.out << '#' << f.id << ' ' << f.status_marker() << ' ' << f.describe() << '\n';
        }

        append_facts(ctx.store, ledger, before);
        return code;
    }

    auto cmd_run(Context & ctx, const string & recipe_path, const string & workdir) -> int;

    auto run_app(Context & ctx, const vector<string> & args) -> int
    {
        CLI::App app{"Ramsey colouring constructions, checks, SAT encodings and a bound ledger", "ramsey"};
        app.require_subcommand(1);
        app.fallthrough();
        string store;
        app.add_option("--store", store, "fact store (default $" + string(store_env) + " or " + default_store + ")");
        app.add_flag("-v,--verbose", ctx.verbose, "print extra progress");

        string file, avoid, out_path, kind, prototype, cnf, model, what, workdir;
        bool exact = false, witness = false, oracle = false, minus_one = false, no_verify = false;
        string input_a, input_b;
        int oracle_cap = default_brute_force_cap, order = 0, width = 1;
        vector<string> inputs;
        std::int64_t clause_cap = default_clause_cap, conflicts = SolveBudget{}.max_conflicts;
        SearchOptions search;
        UsefulnessOptions usefulness;

        auto * verify = app.add_subcommand("verify", "check a colouring file against its clique bounds");
        verify->add_option("file", file)->required();
        verify->add_option("--avoid", avoid, "clique bounds, e.g. 3,3");
        verify->add_flag("--exact", exact, "report exact clique numbers");
        verify->add_flag("--witness", witness, "print a largest clique found in every colour");
        verify->add_flag("--oracle", oracle, "cross-check with exhaustive search");
        verify->add_option("--oracle-cap", oracle_cap, "largest order for exhaustive search");

        auto * construct = app.add_subcommand("construct", "build a colouring: product, template, song, double, tile, paley, rainbow, pentagon, edge");
        construct->add_option("kind", kind)->required();
        construct->add_option("inputs", inputs);
        construct->add_option("--a", input_a, "first input file");
        construct->add_option("--b", input_b, "second input file");
        construct->add_flag("--no-verify", no_verify, "write without checking; marked unverified");
        construct->add_option("-o,--out", out_path);
        construct->add_flag("--minus-one", minus_one, "double to order 2m-1");

        auto * encode = app.add_subcommand("encode", "write a DIMACS CNF: cyclic, linear or extension");
        encode->add_option("kind", kind)->required();
        encode->add_option("--order", order);
        encode->add_option("--avoid", avoid);
        encode->add_option("--prototype", prototype);
        encode->add_option("--width,--t", width, "extension width t");
        encode->add_option("--clause-cap", clause_cap)->check(CLI::PositiveNumber);
        encode->add_option("-o,--out", out_path);

        auto * solve = app.add_subcommand("solve", "run the built-in CDCL solver on a CNF file");
        solve->add_option("cnf", cnf)->required();
        solve->add_option("--conflicts", conflicts, "conflict budget");
        solve->add_option("-o,--out", out_path);

        auto * decode = app.add_subcommand("decode", "turn a solver model into a colouring file");
        decode->add_option("cnf,--cnf", cnf)->required();
        decode->add_option("model,--model", model)->required();
        decode->add_option("-o,--out", out_path);

        auto * search_cmd = app.add_subcommand("search", "search for a template extending a cyclic prototype");
        search_cmd->add_option("what", what)->required();
        search_cmd->add_option("--prototype", prototype)->required();
        search_cmd->add_option("--width,--t", width, "extension width t");
        search_cmd->add_option("--avoid", avoid)->required();
        search_cmd->add_option("--iterations", search.max_iterations);
        search_cmd->add_option("--conflicts", search.budget.max_conflicts);
        search_cmd->add_option("--reps", search.usefulness.max_reps);
        search_cmd->add_option("--rainbow,--rainbow-n", search.usefulness.max_rainbow);
        search_cmd->add_option("-o,--out", out_path);

        auto * tcheck = app.add_subcommand("template-check", "check a template's repetition and rainbow compounds");
        tcheck->add_option("file", file)->required();
        tcheck->add_option("--avoid", avoid, "bounds for the non-template colours");
        tcheck->add_option("--reps", usefulness.max_reps);
        tcheck->add_option("--rainbow,--rainbow-n", usefulness.max_rainbow, "largest rainbow order");

        LedgerArgs la;
        auto * ledger = app.add_subcommand("ledger", "bound ledger operations");
        ledger->require_subcommand(1);
        auto * l_add = ledger->add_subcommand("add", "add a verified colouring file");
        l_add->add_option("file", la.file)->required();
        auto * l_assert = ledger->add_subcommand("assert", "record a graph or gamma bound on someone's word");
        l_assert->add_option("params", la.params, "clique bounds, or k with --gamma")->required();
        l_assert->add_option("order", la.order);
        l_assert->add_option("--source", la.source)->required();
        l_assert->add_option("--structure", la.structure, "general, linear or cyclic");
        l_assert->add_option("--template-phi", la.phi);
        l_assert->add_option("--degree", la.degrees, "colour:degree, regular in that colour");
        l_assert->add_option("--gamma", la.gamma, "Gamma(k) lower bound, e.g. 3.280");
        auto * l_import = ledger->add_subcommand("import", "import asserted or explicit facts from a fact file");
        l_import->add_option("file", la.file)->required();
        auto * l_derive = ledger->add_subcommand("derive", "close the ledger under the derivation rules");
        l_derive->add_option("--rules", la.rules, "e.g. r1,r3,r7 (default all)");
        l_derive->add_option("--depth", la.depth);
        l_derive->add_option("--max-colours", la.max_colours);
        l_derive->add_option("--max-k", la.max_k);
        auto * l_best = ledger->add_subcommand("best", "best bound for R(...), graph(...) or Gamma(k)");
        l_best->add_option("query", la.query)->required();
        l_best->add_option("--at-least", la.at_least, "exit 1 when the bound is lower");
        auto * l_table = ledger->add_subcommand("table", "table of best bounds");
        l_table->add_option("--k", la.k_range);
        l_table->add_option("--r", la.r_range);
        l_table->add_option("--format", la.format);
        ledger->add_subcommand("audit", "recompute derived facts and re-verify files");
        ledger->add_subcommand("list", "list all facts");

        auto * run = app.add_subcommand("run", "run a recipe of steps against the fact store");
        run->add_option("recipe", file)->required();
        run->add_option("--workdir", workdir, "directory for files the recipe writes");

        try {
            vector<string> reversed(args.rbegin(), args.rend());
            app.parse(reversed);
        }
        catch (const CLI::CallForHelp &) {
            ctx.out << app.help();
            return exit_ok;
        }
        catch (const CLI::ParseError & e) {
            ctx.err << e.what() << "\n\n" << app.help();
            return exit_usage;
        }

        if (! store.empty())
            ctx.store = store;

        if (verify->parsed())
            return cmd_verify(ctx, file, avoid, exact, witness, oracle, oracle_cap);
        if (construct->parsed()) {
            if (! input_a.empty())
                inputs.insert(inputs.begin(), input_a);
            if (! input_b.empty())
                inputs.push_back(input_b);
            return cmd_construct(ctx, kind, inputs, out_path, minus_one, ! no_verify);
        }
        if (encode->parsed())
            return cmd_encode(ctx, kind, order, avoid, prototype, width, out_path, clause_cap);
        if (solve->parsed())
            return cmd_solve(ctx, cnf, conflicts, out_path);
        if (decode->parsed())
            return cmd_decode(ctx, cnf, model, out_path);
        if (search_cmd->parsed()) {
            search.clause_cap = clause_cap;
            return cmd_search(ctx, what, prototype, width, avoid, search, out_path);
        }
        if (tcheck->parsed())
            return cmd_template_check(ctx, file, avoid, usefulness);
        if (run->parsed())
            return cmd_run(ctx, file, workdir);
        for (auto * sub : ledger->get_subcommands())
            return cmd_ledger(ctx, sub->get_name(), la);
        return exit_usage;
    }

    auto invoke(Context & ctx, const vector<string> & args) -> int
    {
        try {
            return run_app(ctx, args);
        }
        catch (const UsageError & e) {
            ctx.err << "usage: " << e.what() << '\n';
            return exit_usage;
        }
        catch (const ParseError & e) {
            ctx.err << "error: " << e.what() << '\n';
            return exit_usage;
        }
        catch (const InvariantError & e) {
            ctx.err << "error: " << e.what() << '\n';
            return exit_usage;
        }
        catch (const CapExceeded & e) {
            ctx.err << "refused: " << e.what() << '\n';
            return exit_usage;
        }
        catch (const ArityMismatch & e) {
            ctx.err << "error: " << e.what() << '\n';
            return exit_usage;
        }
        catch (const Error & e) {
            ctx.err << "error: " << e.what() << '\n';
            return exit_usage;
        }
        catch (const std::exception & e) {
            ctx.err << "error: " << e.what() << '\n';
            return exit_usage;
        }
    }

    auto substitute(string text, const fs::path & root, const fs::path & work) -> string
    {
        auto replace = [&](const string & key, const string & value) {
            for (auto at = text.find(key); at != string::npos; at = text.find(key, at + value.size()))
                text.replace(at, key.size(), value);
        };
        replace("{root}", root.string());
        replace("{work}", work.string());
        return text;
    }

    auto cmd_run(Context & ctx, const string & recipe_path, const string & workdir) -> int
    {
        using Json = nlohmann::ordered_json;
        Json recipe;
        try {
            recipe = Json::parse(read_file(recipe_path));
        }
        catch (const Json::exception & e) {
            throw ParseError(recipe_path, e.what());
        }
        if (! recipe.is_object())
            throw ParseError("$", "a recipe is an object");
        for (const auto & [key, _] : recipe.items())
            if (key != "name" && key != "root" && key != "steps" && key != "comment")
                throw ParseError("$." + key, "unknown field");
        auto recipe_dir = fs::absolute(recipe_path).parent_path();
        auto root = fs::weakly_canonical(recipe_dir / recipe.value("root", string{"."}));
        auto store = fs::absolute(ctx.store);
        StoreLock lock{store};
        auto work = workdir.empty() ? store.parent_path() / "work" : fs::absolute(workdir);
        fs::create_directories(work);

        // Steps run against a scratch copy that replaces the store only if
        // every step succeeds.
        auto scratch = fs::path(store.string() + ".run");
        fs::remove(scratch);
        if (fs::exists(store))
            fs::copy_file(store, scratch);

        const auto steps = recipe.value("steps", Json::array());
        int index = 0;
        for (const auto & step : steps) {
            ++index;
            if (! step.is_array() || step.empty())
                throw ParseError("$.steps[" + std::to_string(index - 1) + "]", "a step is a non-empty list of arguments");
            vector<string> args;
            for (const auto & arg : step)
                args.push_back(substitute(arg.get<string>(), root, work));
            string line;
            for (const auto & arg : step)
                line += (line.empty() ? "" : " ") + arg.get<string>();
            ctx.out << "step " << index << ": " << line << '\n';

            Context inner{ctx.out, ctx.err, scratch, ctx.verbose};
            int code = invoke(inner, args);
            if (code != exit_ok) {
                fs::remove(scratch);
                fs::remove(scratch.string() + ".lock");
                ctx.out << "step " << index << " failed with exit code " << code << '\n';
                return exit_negative;
            }
        }
        if (fs::exists(scratch))
            fs::rename(scratch, store);
        fs::remove(scratch.string() + ".lock");
        ctx.out << index << " step(s) completed\n";
        return exit_ok;
    }
}

auto dispatch(const vector<string> & args, ostream & out, ostream & err) -> int
{
    Context ctx{out, err, default_store};
    if (const char * env = std::getenv(store_env); env && *env)
        ctx.store = env;
    return invoke(ctx, args);
}

}
