#include <ramsey/error.hpp>
#include <ramsey/solver.hpp>

#include <doctest.h>

#include <cstdlib>
#include <random>

using namespace ramsey;

namespace
{
    auto satisfies(const std::vector<bool> & model, const std::vector<Clause> & clauses) -> bool
    {
        for (const auto & c : clauses) {
            bool ok = false;
            for (int lit : c)
                ok = ok || model[static_cast<std::size_t>(std::abs(lit))] == (lit > 0);
            if (! ok)
                return false;
        }
        return true;
    }

    auto brute_satisfiable(int n, const std::vector<Clause> & clauses) -> bool
    {
        std::vector<bool> model(static_cast<std::size_t>(n) + 1);
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            for (int v = 1; v <= n; ++v)
                model[static_cast<std::size_t>(v)] = mask >> (v - 1) & 1;
            if (satisfies(model, clauses))
                return true;
        }
        return false;
    }

    // n+1 pigeons into n holes; variable p*n + h + 1.
    auto pigeonhole(int n) -> std::vector<Clause>
    {
        std::vector<Clause> clauses;
        auto var = [&](int p, int h) { return p * n + h + 1; };
        for (int p = 0; p <= n; ++p) {
            Clause c;
            for (int h = 0; h < n; ++h)
                c.push_back(var(p, h));
            clauses.push_back(c);
        }
        for (int h = 0; h < n; ++h)
            for (int p = 0; p <= n; ++p)
                for (int q = p + 1; q <= n; ++q)
                    clauses.push_back({-var(p, h), -var(q, h)});
        return clauses;
    }
}

TEST_CASE("trivial instances")
{
    CHECK(solve_cnf(0, {}).status == SolveStatus::satisfiable);
    CHECK(solve_cnf(1, {{}}).status == SolveStatus::unsatisfiable);
    CHECK(solve_cnf(1, {{1}, {-1}}).status == SolveStatus::unsatisfiable);
    auto r = solve_cnf(2, {{1, 2}, {-1}});
    REQUIRE(r.status == SolveStatus::satisfiable);
    CHECK_FALSE(r.model[1]);
    CHECK(r.model[2]);
    CHECK(solve_cnf(2, {{1, -1}}).status == SolveStatus::satisfiable);
    CHECK_THROWS_AS(solve_cnf(2, {{3}}), InvariantError);
}

TEST_CASE("pigeonhole instances are unsatisfiable")
{
    for (int n = 1; n <= 6; ++n)
        CHECK(solve_cnf((n + 1) * n, pigeonhole(n)).status == SolveStatus::unsatisfiable);
}

TEST_CASE("budget exhaustion reports unknown")
{
    auto r = solve_cnf(8 * 7, pigeonhole(7), {.max_conflicts = 5});
    CHECK(r.status == SolveStatus::unknown);
}

TEST_CASE("random 3-SAT agrees with enumeration")
{
    std::mt19937 rng(13);
    int sat = 0, unsat = 0;
    for (int trial = 0; trial < 300; ++trial) {
        int n = 3 + static_cast<int>(rng() % 10);
        int m = static_cast<int>(n * (3.0 + (rng() % 300) / 100.0));
        std::vector<Clause> clauses;
        for (int i = 0; i < m; ++i) {
            Clause c;
            for (int k = 0; k < 3; ++k) {
                int v = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
                c.push_back(rng() % 2 ? v : -v);
            }
            clauses.push_back(c);
        }
        auto r = solve_cnf(n, clauses);
        bool expected = brute_satisfiable(n, clauses);
        REQUIRE((r.status == SolveStatus::satisfiable) == expected);
        if (expected) {
            REQUIRE(satisfies(r.model, clauses));
            ++sat;
        }
        else
            ++unsat;
    }
    CHECK(sat > 20);
    CHECK(unsat > 20);
}

TEST_CASE("solving is deterministic")
{
    std::mt19937 rng(1);
    std::vector<Clause> clauses;
    for (int i = 0; i < 150; ++i)
        clauses.push_back({1 + static_cast<int>(rng() % 40), -(1 + static_cast<int>(rng() % 40)), 1 + static_cast<int>(rng() % 40)});
    auto a = solve_cnf(40, clauses), b = solve_cnf(40, clauses);
    CHECK(a.status == b.status);
    CHECK(a.model == b.model);
    CHECK(a.conflicts == b.conflicts);
}
