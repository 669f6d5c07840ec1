#include <ramsey/error.hpp>
#include <ramsey/solver.hpp>

#include <algorithm>
#include <cstdlib>
#include <numeric>

using std::vector;

namespace ramsey {

namespace
{
    // Internal literal: 2v for v true, 2v+1 for v false.
    using Lit = int;

    constexpr int no_reason = -1;

    auto to_lit(int dimacs) -> Lit { return dimacs > 0 ? 2 * dimacs : 2 * (-dimacs) + 1; }
    auto var_of(Lit l) -> int { return l >> 1; }
    auto negate(Lit l) -> Lit { return l ^ 1; }

    class Cdcl
    {
    public:
        Cdcl(int num_vars, const vector<Clause> & clauses) :
            _num_vars(num_vars),
            _value(static_cast<std::size_t>(num_vars) + 1, -1),
            _level(static_cast<std::size_t>(num_vars) + 1, 0),
            _reason(static_cast<std::size_t>(num_vars) + 1, no_reason),
            _seen(static_cast<std::size_t>(num_vars) + 1, false),
            _watches(2 * (static_cast<std::size_t>(num_vars) + 1))
        {
            vector<std::int64_t> occurrences(static_cast<std::size_t>(num_vars) + 1, 0);
            for (const auto & clause : clauses)
                for (int lit : clause) {
                    if (lit == 0 || std::abs(lit) > num_vars)
                        throw InvariantError("literal " + std::to_string(lit) + " outside variable range 1.." + std::to_string(num_vars));
                    ++occurrences[static_cast<std::size_t>(std::abs(lit))];
                }

            _order.resize(static_cast<std::size_t>(num_vars));
            std::iota(_order.begin(), _order.end(), 1);
            std::stable_sort(_order.begin(), _order.end(), [&](int a, int b) {
                return occurrences[static_cast<std::size_t>(a)] > occurrences[static_cast<std::size_t>(b)];
            });

            for (const auto & clause : clauses) {
                vector<Lit> lits;
                for (int lit : clause)
                    lits.push_back(to_lit(lit));
                std::sort(lits.begin(), lits.end());
                lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
                bool tautology = false;
                for (std::size_t i = 0; i + 1 < lits.size(); ++i)
                    if (var_of(lits[i]) == var_of(lits[i + 1]))
                        tautology = true;
                if (tautology)
                    continue;
                if (lits.empty()) {
                    _contradiction = true;
                    continue;
                }
                if (lits.size() == 1) {
                    _units.push_back(lits[0]);
                    continue;
                }
                attach(std::move(lits));
            }
        }

        auto solve(const SolveBudget & budget) -> SolveResult
        {
            SolveResult result;
            if (_contradiction) {
                result.status = SolveStatus::unsatisfiable;
                return result;
            }
            for (Lit unit : _units) {
                if (value(unit) == 0) {
                    result.status = SolveStatus::unsatisfiable;
                    return result;
                }
                if (value(unit) == -1)
                    assign(unit, no_reason);
            }

            while (true) {
                int conflict = propagate();
                if (conflict != no_reason) {
                    ++result.conflicts;
                    if (decision_level() == 0) {
                        result.status = SolveStatus::unsatisfiable;
                        return result;
                    }
                    if (result.conflicts > budget.max_conflicts) {
                        result.status = SolveStatus::unknown;
                        return result;
                    }
                    auto [learnt, back_level] = analyse(conflict);
                    backtrack(back_level);
                    if (learnt.size() == 1)
                        assign(learnt[0], no_reason);
                    else {
                        Lit asserting = learnt[0];
                        int index = attach(std::move(learnt));
                        assign(asserting, index);
                    }
                    continue;
                }

                int next = pick();
                if (next == 0) {
                    result.status = SolveStatus::satisfiable;
                    result.model.assign(static_cast<std::size_t>(_num_vars) + 1, false);
                    for (int v = 1; v <= _num_vars; ++v)
                        result.model[static_cast<std::size_t>(v)] = _value[static_cast<std::size_t>(v)] == 1;
                    return result;
                }
                ++result.decisions;
                _trail_limits.push_back(_trail.size());
                assign(2 * next, no_reason);
            }
        }

    private:
        auto value(Lit l) const -> int
        {
            int v = _value[static_cast<std::size_t>(var_of(l))];
            if (v == -1)
                return -1;
            return (l & 1) ? 1 - v : v;
        }

        auto decision_level() const -> int { return static_cast<int>(_trail_limits.size()); }

        void assign(Lit l, int reason)
        {
            auto v = static_cast<std::size_t>(var_of(l));
            _value[v] = (l & 1) ? 0 : 1;
            _level[v] = decision_level();
            _reason[v] = reason;
            _trail.push_back(l);
        }

        auto attach(vector<Lit> lits) -> int
        {
            int index = static_cast<int>(_clauses.size());
            _watches[static_cast<std::size_t>(lits[0])].push_back(index);
            _watches[static_cast<std::size_t>(lits[1])].push_back(index);
            _clauses.push_back(std::move(lits));
            return index;
        }

        // Returns a conflicting clause index or no_reason.
        auto propagate() -> int
        {
            while (_head < _trail.size()) {
                Lit falsified = negate(_trail[_head++]);
                auto & watching = _watches[static_cast<std::size_t>(falsified)];
                std::size_t keep = 0;
                for (std::size_t i = 0; i < watching.size(); ++i) {
                    int index = watching[i];
                    auto & c = _clauses[static_cast<std::size_t>(index)];
                    if (c[0] == falsified)
                        std::swap(c[0], c[1]);
                    if (value(c[0]) == 1) {
                        watching[keep++] = index;
                        continue;
                    }
                    bool moved = false;
                    for (std::size_t k = 2; k < c.size(); ++k)
                        if (value(c[k]) != 0) {
                            std::swap(c[1], c[k]);
                            _watches[static_cast<std::size_t>(c[1])].push_back(index);
                            moved = true;
                            break;
                        }
                    if (moved)
                        continue;
                    watching[keep++] = index;
                    if (value(c[0]) == 0) {
                        for (++i; i < watching.size(); ++i)
                            watching[keep++] = watching[i];
                        watching.resize(keep);
                        _head = _trail.size();
                        return index;
                    }
                    assign(c[0], index);
                }
                watching.resize(keep);
            }
            return no_reason;
        }

        auto analyse(int conflict) -> std::pair<vector<Lit>, int>
        {
            vector<Lit> learnt{0};
            int pending = 0;
            Lit implied = -1;
            auto index = _trail.size();
            int reason = conflict;

            do {
                const auto & c = _clauses[static_cast<std::size_t>(reason)];
                for (std::size_t k = implied == -1 ? 0 : 1; k < c.size(); ++k) {
                    auto v = static_cast<std::size_t>(var_of(c[k]));
                    if (_seen[v] || _level[v] == 0)
                        continue;
                    _seen[v] = true;
                    if (_level[v] == decision_level())
                        ++pending;
                    else
                        learnt.push_back(c[k]);
                }
                while (! _seen[static_cast<std::size_t>(var_of(_trail[--index]))])
                    ;
                implied = _trail[index];
                _seen[static_cast<std::size_t>(var_of(implied))] = false;
                reason = _reason[static_cast<std::size_t>(var_of(implied))];
                --pending;
            } while (pending > 0);

            learnt[0] = negate(implied);
            int back_level = 0;
            for (std::size_t k = 1; k < learnt.size(); ++k) {
                int level = _level[static_cast<std::size_t>(var_of(learnt[k]))];
                if (level > back_level) {
                    back_level = level;
                    std::swap(learnt[1], learnt[k]);
                }
            }
            for (Lit l : learnt)
                _seen[static_cast<std::size_t>(var_of(l))] = false;
            return {std::move(learnt), back_level};
        }

        void backtrack(int level)
        {
            if (decision_level() <= level)
                return;
            auto limit = _trail_limits[static_cast<std::size_t>(level)];
            for (auto i = _trail.size(); i-- > limit;) {
                auto v = static_cast<std::size_t>(var_of(_trail[i]));
                _value[v] = -1;
                _reason[v] = no_reason;
            }
            _trail.resize(limit);
            _trail_limits.resize(static_cast<std::size_t>(level));
            _head = _trail.size();
        }

        auto pick() const -> int
        {
            for (int v : _order)
                if (_value[static_cast<std::size_t>(v)] == -1)
                    return v;
            return 0;
        }

        int _num_vars;
        bool _contradiction = false;
        vector<Lit> _units;
        vector<vector<Lit>> _clauses;
        vector<int> _value, _level, _reason;
        vector<bool> _seen;
        vector<vector<int>> _watches;
        vector<Lit> _trail;
        vector<std::size_t> _trail_limits;
        std::size_t _head = 0;
        vector<int> _order;
    };
}

auto solve_cnf(int num_vars, const vector<Clause> & clauses, const SolveBudget & budget) -> SolveResult
{
    auto result = Cdcl{num_vars, clauses}.solve(budget);
    if (result.status == SolveStatus::satisfiable)
        for (const auto & clause : clauses) {
            bool satisfied = std::any_of(clause.begin(), clause.end(), [&](int lit) {
                return result.model[static_cast<std::size_t>(std::abs(lit))] == (lit > 0);
            });
            if (! satisfied)
                throw InternalError("solver model violates an input clause");
        }
    return result;
}

}
