#pragma once

#include <cstdint>
#include <vector>

namespace ramsey {

using Clause = std::vector<int>;

enum class SolveStatus
{
    satisfiable,
    unsatisfiable,
    unknown
};

struct SolveResult
{
    SolveStatus status = SolveStatus::unknown;
    /// model[v] for v in 1..num_vars; index 0 unused. Empty unless SAT.
    std::vector<bool> model;
    std::int64_t conflicts = 0;
    std::int64_t decisions = 0;
};

struct SolveBudget
{
    std::int64_t max_conflicts = 2'000'000;
};

/// Complete CDCL search: two watched literals, first-UIP clause learning,
/// non-chronological backjumping. Decisions follow a static order (most
/// occurrences first, lowest id on ties), trying true before false.
///
/// SAT answers are re-checked against every input clause before return.
auto solve_cnf(int num_vars, const std::vector<Clause> & clauses, const SolveBudget & budget = {}) -> SolveResult;

}
