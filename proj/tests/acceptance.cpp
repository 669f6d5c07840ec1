// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <ramsey/cliques.hpp>
#include <ramsey/constructions.hpp>
#include <ramsey/ledger.hpp>
#include <ramsey/sat.hpp>
#include <ramsey/templates.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace ramsey;

namespace
{
    struct Outcome
    {
        bool pass = true;
        std::string detail;
    };

    auto threes(int r) -> ParameterVector
    {
        return ParameterVector{std::vector<int>(static_cast<std::size_t>(r), 3)};
    }

    auto source_dir() -> std::filesystem::path
    {
        return RAMSEY_SOURCE_DIR;
    }

    auto random_explicit(std::mt19937 & rng, int order, int r) -> ExplicitColouring
    {
        std::uniform_int_distribution<Colour> pick(1, r);
        ExplicitColouring g(order, r);
        for (int i = 0; i < order; ++i)
            for (int j = i + 1; j < order; ++j)
                g.set(i, j, pick(rng));
        return g;
    }

    auto all_linear(int order, int r) -> std::vector<LengthColouring>
    {
        std::vector<LengthColouring> out;
        std::vector<Colour> c(static_cast<std::size_t>(order - 1), 1);
        while (true) {
            out.push_back(LengthColouring::linear(order, r, c));
            std::size_t i = 0;
            while (i < c.size() && c[i] == r)
                c[i++] = 1;
            if (i == c.size())
                return out;
            ++c[i];
        }
    }

    auto status_of(const CnfInstance & instance) -> SolveStatus
    {
        return solve_internal(instance).status;
    }

    auto oracle_equivalence() -> Outcome
    {
        std::mt19937 rng(2024);
        int colours_checked = 0;
        for (int trial = 0; trial < 240; ++trial) {
            int m = 2 + static_cast<int>(rng() % 11), r = 1 + static_cast<int>(rng() % 4);
            auto g = random_explicit(rng, m, r);
            for (Colour s = 1; s <= r; ++s) {
                auto fast = max_clique_in_colour(g, s);
                if (fast.size != max_clique_brute(g, s) || ! is_monochromatic_clique(g, s, fast.witness))
                    return {false, "mismatch at order " + std::to_string(m)};
                ++colours_checked;
            }
        }
        return {true, "240 colourings, " + std::to_string(colours_checked) + " colour classes"};
    }

    auto r33() -> Outcome
    {
        bool ok = status_of(encode_cyclic(5, threes(2))) == SolveStatus::satisfiable
            && status_of(encode_cyclic(6, threes(2))) == SolveStatus::unsatisfiable
            && status_of(encode_linear(5, threes(2))) == SolveStatus::satisfiable
            && status_of(encode_linear(6, threes(2))) == SolveStatus::unsatisfiable;
        return {ok, "cyclic and linear: SAT at 5, UNSAT at 6"};
    }

    auto r333() -> Outcome
    {
        auto p = threes(3);
        auto at16 = encode_cyclic(16, p);
        auto sixteen = solve_internal(at16);
        bool unsat17 = status_of(encode_cyclic(17, p)) == SolveStatus::unsatisfiable;
        bool sat14 = false;
        auto at14 = encode_cyclic(14, p);
        if (auto r = solve_internal(at14); r.status == SolveStatus::satisfiable)
            sat14 = ramsey_check(decode_model(r.model, at14), p).passes;
        if (sixteen.status == SolveStatus::satisfiable) {
            bool decoded = ramsey_check(decode_model(sixteen.model, at16), p).passes;
            return {decoded && unsat17, "SAT at 16, decoded model verified"};
        }
        std::ostringstream detail;
        detail << "order 16 is " << (sixteen.status == SolveStatus::unsatisfiable ? "UNSAT" : "unknown")
               << ": the colour classes of a cyclic colouring are sum-free, and [1,15] has no 3-part sum-free partition"
               << " (largest cyclic order 14: " << (sat14 ? "SAT, verified" : "not found") << "; order 17 "
               << (unsat17 ? "UNSAT" : "not UNSAT") << ")";
        return {false, detail.str()};
    }

    auto product_chain() -> Outcome
    {
        auto edge = single_edge();
        auto c5 = product_linear(edge, edge);
        auto c14 = product_linear(c5, edge);
        auto c41 = product_linear(c5, c5);
        bool ok = c5.order() == product_order(2, 2) && c5.order() == 5 && c14.order() == product_order(5, 2) && c14.order() == 14
            && c41.order() == product_order(5, 5) && c41.order() == 41 && ramsey_check(c5, threes(2)).passes
            && ramsey_check(c14, threes(3)).passes && ramsey_check(c41, threes(4)).passes;
        return {ok, "orders 5, 14, 41 verified"};
    }

    auto cyclic_product() -> Outcome
    {
        auto p41 = product_cyclic(pentagon(), pentagon());
        bool ok = p41.order() == 41 && check_cyclic_symmetry(p41.to_linear()) && ramsey_check(p41, threes(4)).passes;
        return {ok, "order 41 cyclic, (3,3,3,3) verified"};
    }

    auto compound_consistency() -> Outcome
    {
        std::vector<LengthColouring> inputs;
        for (int m = 2; m <= 7; ++m)
            for (int r = 1; r <= 3; ++r)
                for (const auto & c : all_linear(m, r))
                    if (ramsey_check(c, threes(r)).passes)
                        inputs.push_back(c);
        std::size_t pairs = 0;
        for (const auto & a : inputs) {
            auto t = double_to_template(a);
            for (const auto & b : inputs) {
                if (template_compound(t, b) != product_linear(a, b))
                    return {false, "differs at orders " + std::to_string(a.order()) + ", " + std::to_string(b.order())};
                ++pairs;
            }
        }
        return {true, std::to_string(inputs.size()) + " passing inputs, " + std::to_string(pairs) + " pairs identical"};
    }

    auto pentagon_template() -> Outcome
    {
        auto t = double_to_template(pentagon().to_linear());
        auto report = check_usefulness(t, threes(2), {.max_reps = 8, .max_rainbow = 6});
        bool ok = is_tf_template(t.base(), t.template_colour()) && t.phi() == 4 && report.tf_template && report.passes()
            && report.repetitions.size() == 8 && report.rainbow_compounds.size() == 5;
        return {ok, "tf-template, phi " + std::to_string(t.phi()) + ", repetitions to 8, rainbow to 6"};
    }

    auto grid_product() -> Outcome
    {
        auto g = expand_to_explicit(pentagon());
        auto s = song_product(g, g);
        auto report = ramsey_check(s, ParameterVector{{5, 5}}, {.exact = true});
        bool ok = s.order() == 25 && report.passes && report.per_colour_max[0] <= 4 && report.per_colour_max[1] <= 4;
        return {ok, "order 25, clique numbers " + std::to_string(report.per_colour_max[0]) + " and " + std::to_string(report.per_colour_max[1])};
    }

    auto seed_pack() -> Outcome
    {
        auto ledger = Ledger::parse(read_file(source_dir() / "data" / "seed_pack.jsonl"));
        ledger.derive_closure();
        auto best = [&](const std::string & q) { return ledger.best_bound(parse_query(q)); };
        auto uses = [&](const BoundFact & f, const std::string & rule) {
            auto rules = ledger.chain_rules(f);
            return std::find(rules.begin(), rules.end(), rule) != rules.end();
        };

        auto r9 = best("R(9,9,9)"), r8 = best("R(8,8,8)");
        bool ok = r9.value == 15041 && uses(r9, "R8") && uses(r9, "R7");
        ok = ok && r8.value == 7174 && uses(r8, "R8") && uses(r8, "R9") && best("graph(8,8,8)").value == 9 * 273 + 7 * 673 + 5;
        ok = ok && best("R(3,6,6)").value == 338 && uses(best("R(3,6,6)"), "R7");
        ok = ok && best("R(3,8,8)").value == 941 && uses(best("R(3,8,8)"), "R7");
        ok = ok && best("Gamma(6)").gamma->render() == "15.297058";

        auto r10 = Ledger::parse(read_file(source_dir() / "data" / "seed_pack.jsonl"));
        r10.derive_closure({.rules = {10}});
        auto g5 = r10.best_bound(parse_query("Gamma(5)"));
        ok = ok && g5.certificate.rule == "R10" && std::abs(std::stod(g5.gamma->render()) - 9.919) < 0.001;
        return {ok, "15041, 7174, 338, 941, Gamma(6) " + best("Gamma(6)").gamma->render() + ", Gamma(5) " + g5.gamma->render() + " by R10"};
    }

    auto golden_files() -> Outcome
    {
        bool ok = true;
        for (int m : {5, 6}) {
            auto first = write_dimacs(encode_cyclic(m, threes(2)));
            auto second = write_dimacs(encode_cyclic(m, threes(2)));
            auto golden = read_file(source_dir() / "tests" / "golden" / ("cyclic_" + std::to_string(m) + "_3_3.cnf"));
            ok = ok && first == second && first == golden;
        }
        return {ok, "orders 5 and 6 match the golden files"};
    }

    auto paley17() -> Outcome
    {
        auto g = expand_to_explicit(paley_colouring(17));
        bool ok = max_clique_brute(g, 1, 17) == 3 && max_clique_brute(g, 2, 17) == 3 && ramsey_check(g, ParameterVector{{4, 4}}).passes;
        return {ok, "(4,4;17) confirmed by exhaustive search"};
    }

    auto neighbourhoods() -> Outcome
    {
        std::mt19937 rng(5);
        std::vector<LengthColouring> pool;
        for (int trial = 0; trial < 4000 && pool.size() < 60; ++trial) {
            int r = 2 + static_cast<int>(rng() % 2), m = 4 + static_cast<int>(rng() % (r == 2 ? 2 : 10));
            std::vector<Colour> c(static_cast<std::size_t>(m - 1));
            for (auto & x : c)
                x = 1 + static_cast<int>(rng() % static_cast<unsigned>(r));
            auto colouring = LengthColouring::linear(m, r, c);
            if (ramsey_check(colouring, threes(r)).passes)
                pool.push_back(colouring);
        }
        pool.push_back(paley_colouring(17));
        pool.push_back(product_linear(pentagon().to_linear(), pentagon().to_linear()));

        int checked = 0;
        for (const auto & c : pool) {
            auto p = c.order() == 17 ? ParameterVector{{4, 4}} : threes(c.num_colours());
            auto g = expand_to_explicit(c);
            int v = static_cast<int>(rng() % static_cast<unsigned>(c.order()));
            for (Colour s = 1; s <= c.num_colours(); ++s) {
                auto n = neighbourhood_restrict(g, v, s);
                auto lowered = p.values();
                --lowered[static_cast<std::size_t>(s - 1)];
                if (lowered[static_cast<std::size_t>(s - 1)] < 2) {
                    if (n.colouring.order() > 1)
                        return {false, "edge in a colour bounded by 2"};
                }
                else if (! n.degenerate && ! ramsey_check(n.colouring, ParameterVector{lowered}).passes)
                    return {false, "neighbourhood of order " + std::to_string(n.colouring.order()) + " fails"};
                ++checked;
            }
        }
        return {pool.size() >= 50, std::to_string(pool.size()) + " colourings, " + std::to_string(checked) + " neighbourhoods"};
    }
}

int main()
{
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"R(3,3) by SAT", r33},
        {"R(3,3,3) cyclic search", r333},
        {"product chain 5, 14, 41", product_chain},
        {"cyclic product of pentagons", cyclic_product},
        {"template compound equals product", compound_consistency},
        {"doubled pentagon template", pentagon_template},
        {"grid product of pentagons", grid_product},
        {"seed pack bounds", seed_pack},
        {"DIMACS golden files", golden_files},
        {"Paley 17", paley17},
        {"neighbourhood restriction", neighbourhoods},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        }
        catch (const std::exception & e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += outcome.pass ? 0 : 1;
        std::cout << (outcome.pass ? "PASS" : "FAIL") << ' ' << i + 1 << ' ' << criteria[i].first << " (" << std::fixed
                  << std::setprecision(2) << seconds << " s): " << outcome.detail << '\n';
    }
    std::cout << criteria.size() - static_cast<std::size_t>(failures) << '/' << criteria.size() << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
