#include <ramsey/cliques.hpp>
#include <ramsey/error.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <future>
#include <numeric>

using std::optional;
using std::vector;

namespace ramsey {

namespace
{
    class Bitset
    {
    public:
        explicit Bitset(int bits = 0) :
            _words(static_cast<std::size_t>((bits + 63) / 64), 0)
        {
        }

        void set(int i) { _words[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63); }
        void reset(int i) { _words[static_cast<std::size_t>(i) >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

        auto any() const -> bool
        {
            return std::any_of(_words.begin(), _words.end(), [](auto w) { return w != 0; });
        }

        auto count() const -> int
        {
            int n = 0;
            for (auto w : _words)
                n += std::popcount(w);
            return n;
        }

        /// Lowest set bit, or -1.
        auto first() const -> int
        {
            for (std::size_t i = 0; i < _words.size(); ++i)
                if (_words[i] != 0)
                    return static_cast<int>(i * 64) + std::countr_zero(_words[i]);
            return -1;
        }

        void intersect_with(const Bitset & other)
        {
            for (std::size_t i = 0; i < _words.size(); ++i)
                _words[i] &= other._words[i];
        }

        void subtract(const Bitset & other)
        {
            for (std::size_t i = 0; i < _words.size(); ++i)
                _words[i] &= ~other._words[i];
        }

    private:
        vector<std::uint64_t> _words;
    };

    class CliqueSearch
    {
    public:
        CliqueSearch(const ExplicitColouring & g, Colour s, const vector<int> & among, optional<int> stop_at) :
            _stop_at(stop_at)
        {
            int n = static_cast<int>(among.size());
            vector<int> degree(static_cast<std::size_t>(n), 0);
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    if (g.colour(among[static_cast<std::size_t>(a)], among[static_cast<std::size_t>(b)]) == s) {
                        ++degree[static_cast<std::size_t>(a)];
                        ++degree[static_cast<std::size_t>(b)];
                    }

            // Descending degree, lowest vertex index on ties.
            vector<int> position(static_cast<std::size_t>(n));
            std::iota(position.begin(), position.end(), 0);
            std::stable_sort(position.begin(), position.end(), [&](int a, int b) {
                return degree[static_cast<std::size_t>(a)] > degree[static_cast<std::size_t>(b)];
            });

            _label.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                _label[static_cast<std::size_t>(i)] = among[static_cast<std::size_t>(position[static_cast<std::size_t>(i)])];

            _adjacent.assign(static_cast<std::size_t>(n), Bitset{n});
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    if (g.colour(_label[static_cast<std::size_t>(a)], _label[static_cast<std::size_t>(b)]) == s) {
                        _adjacent[static_cast<std::size_t>(a)].set(b);
                        _adjacent[static_cast<std::size_t>(b)].set(a);
                    }
            _size = n;
        }

        auto run() -> CliqueResult
        {
            Bitset candidates{_size};
            for (int i = 0; i < _size; ++i)
                candidates.set(i);
            vector<int> current;
            if (_size > 0)
                expand(current, candidates);

            CliqueResult result;
            result.size = static_cast<int>(_best.size());
            for (int v : _best)
                result.witness.push_back(_label[static_cast<std::size_t>(v)]);
            std::sort(result.witness.begin(), result.witness.end());
            return result;
        }

    private:
        auto done() const -> bool
        {
            return _stop_at && static_cast<int>(_best.size()) >= *_stop_at;
        }

        void expand(vector<int> & current, Bitset candidates)
        {
            vector<int> order, bound;
            order.reserve(static_cast<std::size_t>(candidates.count()));
            bound.reserve(order.capacity());
            Bitset uncoloured = candidates;
            for (int colour = 1; uncoloured.any(); ++colour) {
                Bitset available = uncoloured;
                for (int v = available.first(); v != -1; v = available.first()) {
                    available.reset(v);
                    uncoloured.reset(v);
                    available.subtract(_adjacent[static_cast<std::size_t>(v)]);
                    order.push_back(v);
                    bound.push_back(colour);
                }
            }

            for (auto i = order.size(); i-- > 0;) {
                if (current.size() + static_cast<std::size_t>(bound[i]) <= _best.size())
                    return;
                int v = order[i];
                current.push_back(v);
                Bitset next = candidates;
                next.intersect_with(_adjacent[static_cast<std::size_t>(v)]);
                if (next.any())
                    expand(current, next);
                else if (current.size() > _best.size())
                    _best = current;
                current.pop_back();
                if (done())
                    return;
                candidates.reset(v);
            }
        }

        optional<int> _stop_at;
        int _size = 0;
        vector<int> _label;
        vector<Bitset> _adjacent;
        vector<int> _best;
    };
}

auto max_clique_among(const ExplicitColouring & g, Colour s, const vector<int> & among, optional<int> stop_at) -> CliqueResult
{
    if (s < 1 || s > g.num_colours())
        throw InvariantError("colour " + std::to_string(s) + " outside [1, " + std::to_string(g.num_colours()) + "]");
    return CliqueSearch{g, s, among, stop_at}.run();
}

auto max_clique_in_colour(const ExplicitColouring & g, Colour s, optional<int> stop_at) -> CliqueResult
{
    vector<int> all(static_cast<std::size_t>(g.order()));
    std::iota(all.begin(), all.end(), 0);
    return max_clique_among(g, s, all, stop_at);
}

auto max_clique_brute(const ExplicitColouring & g, Colour s, int cap) -> int
{
    cap = std::min(cap, 24);
    if (g.order() > cap)
        throw CapExceeded("brute-force clique oracle refuses order " + std::to_string(g.order()) + " (cap " + std::to_string(cap) + ")");
    if (s < 1 || s > g.num_colours())
        throw InvariantError("colour out of range");

    int n = g.order();
    vector<std::uint32_t> adjacent(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g.colour(i, j) == s) {
                adjacent[static_cast<std::size_t>(i)] |= std::uint32_t{1} << j;
                adjacent[static_cast<std::size_t>(j)] |= std::uint32_t{1} << i;
            }

    int best = 0;
    std::uint32_t limit = n == 0 ? 0 : (std::uint32_t{1} << n);
    for (std::uint32_t subset = 1; subset < limit; ++subset) {
        int size = std::popcount(subset);
        if (size <= best)
            continue;
        bool clique = true;
        for (std::uint32_t rest = subset; rest != 0 && clique; rest &= rest - 1) {
            int v = std::countr_zero(rest);
            std::uint32_t others = subset & ~(std::uint32_t{1} << v);
            clique = (others & ~adjacent[static_cast<std::size_t>(v)]) == 0;
        }
        if (clique)
            best = size;
    }
    return best;
}

auto is_monochromatic_clique(const ExplicitColouring & g, Colour s, const vector<int> & vertices) -> bool
{
    for (std::size_t a = 0; a < vertices.size(); ++a) {
        if (vertices[a] < 0 || vertices[a] >= g.order())
            return false;
        for (std::size_t b = a + 1; b < vertices.size(); ++b)
            if (vertices[a] == vertices[b] || g.colour(vertices[a], vertices[b]) != s)
                return false;
    }
    return true;
}

auto CliqueReport::failing_colours() const -> vector<Colour>
{
    vector<Colour> result;
    for (std::size_t i = 0; i < per_colour_max.size(); ++i)
        if (per_colour_max[i] >= bounds[i])
            result.push_back(static_cast<Colour>(i + 1));
    return result;
}

namespace
{
    void require_arity(int num_colours, const ParameterVector & p)
    {
        if (p.size() != static_cast<std::size_t>(num_colours))
            throw ArityMismatch("parameter vector has " + std::to_string(p.size()) + " bounds for " + std::to_string(num_colours) + " colours");
    }

    template <typename PerColour>
    auto assemble(const ExplicitColouring & g, const ParameterVector & p, const CheckOptions & options, PerColour per_colour) -> CliqueReport
    {
        int r = g.num_colours();
        vector<CliqueResult> results(static_cast<std::size_t>(r));
        if (r > 1 && g.order() > options.parallel_threshold) {
            vector<std::future<CliqueResult>> pending;
            for (Colour s = 1; s <= r; ++s)
                pending.push_back(std::async(std::launch::async, per_colour, s));
            for (std::size_t i = 0; i < pending.size(); ++i)
                results[i] = pending[i].get();
        }
        else
            for (Colour s = 1; s <= r; ++s)
                results[static_cast<std::size_t>(s - 1)] = per_colour(s);

        CliqueReport report;
        report.passes = true;
        for (Colour s = 1; s <= r; ++s) {
            auto & result = results[static_cast<std::size_t>(s - 1)];
            int bound = p.for_colour(s);
            report.per_colour_max.push_back(result.size);
            report.bounds.push_back(bound);
            report.exact.push_back(options.exact || result.size < bound);
            report.witness.push_back(std::move(result.witness));
            if (result.size >= bound)
                report.passes = false;
        }
        return report;
    }
}

auto ramsey_check(const ExplicitColouring & g, const ParameterVector & p, const CheckOptions & options) -> CliqueReport
{
    require_arity(g.num_colours(), p);
    return assemble(g, p, options, [&](Colour s) {
        optional<int> stop = options.exact ? optional<int>{} : optional<int>{p.for_colour(s)};
        return max_clique_in_colour(g, s, stop);
    });
}

auto ramsey_check(const LengthColouring & c, const ParameterVector & p, const CheckOptions & options) -> CliqueReport
{
    require_arity(c.num_colours(), p);
    auto g = expand_to_explicit(c);
    if (! c.is_cyclic())
        return ramsey_check(g, p, options);

    return assemble(g, p, options, [&](Colour s) {
        vector<int> neighbours;
        for (int u = 1; u < g.order(); ++u)
            if (g.colour(0, u) == s)
                neighbours.push_back(u);
        CliqueResult result{1, {0}};
        if (neighbours.empty())
            return result;
        optional<int> stop = options.exact ? optional<int>{} : optional<int>{p.for_colour(s) - 1};
        auto inner = max_clique_among(g, s, neighbours, stop);
        result.size = inner.size + 1;
        result.witness.insert(result.witness.end(), inner.witness.begin(), inner.witness.end());
        return result;
    });
}

auto ramsey_check(const ColouringDocument & doc, const ParameterVector & p, const CheckOptions & options) -> CliqueReport
{
    if (auto c = std::get_if<LengthColouring>(&doc.body))
        return ramsey_check(*c, p, options);
    return ramsey_check(std::get<ExplicitColouring>(doc.body), p, options);
}

auto colour_degree(const ExplicitColouring & g, int v, Colour s) -> int
{
    if (v < 0 || v >= g.order())
        throw InvariantError("vertex " + std::to_string(v) + " out of range");
    int degree = 0;
    for (int u = 0; u < g.order(); ++u)
        if (u != v && g.colour(u, v) == s)
            ++degree;
    return degree;
}

auto regular_colour_degree(const ExplicitColouring & g, Colour s) -> optional<int>
{
    if (g.order() == 0)
        return std::nullopt;
    int first = colour_degree(g, 0, s);
    for (int v = 1; v < g.order(); ++v)
        if (colour_degree(g, v, s) != first)
            return std::nullopt;
    return first;
}

auto neighbourhood_restrict(const ExplicitColouring & g, int v, Colour s) -> Neighbourhood
{
    if (v < 0 || v >= g.order())
        throw InvariantError("vertex " + std::to_string(v) + " out of range");
    vector<int> vertices;
    for (int u = 0; u < g.order(); ++u)
        if (u != v && g.colour(u, v) == s)
            vertices.push_back(u);

    int n = static_cast<int>(vertices.size());
    ExplicitColouring induced{n, g.num_colours()};
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            induced.set(a, b, g.colour(vertices[static_cast<std::size_t>(a)], vertices[static_cast<std::size_t>(b)]));
    return Neighbourhood{std::move(induced), std::move(vertices), n <= 1};
}

}
