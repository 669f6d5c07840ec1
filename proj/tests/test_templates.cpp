#include "support.hpp"

#include <ramsey/constructions.hpp>
#include <ramsey/error.hpp>
#include <ramsey/templates.hpp>

#include <doctest.h>

#include <algorithm>

using namespace ramsey;

namespace
{
    // Order-10 linear colouring: lengths listed for colour 3, the rest
    // alternate colours 1 and 2.
    auto with_class(const std::vector<int> & lengths) -> LengthColouring
    {
        std::vector<Colour> c(9);
        for (int l = 1; l <= 9; ++l)
            c[static_cast<std::size_t>(l - 1)] = std::find(lengths.begin(), lengths.end(), l) != lengths.end() ? 3 : 1 + l % 2;
        return LengthColouring::linear(10, 3, c);
    }

    auto doubled_pentagon() -> TemplateGraph
    {
        return double_to_template(pentagon().to_linear());
    }
}

TEST_CASE("sum-free sets")
{
    CHECK(is_sum_free({5, 6, 7, 8, 9}));
    CHECK_FALSE(is_sum_free({3, 6, 9}));
    CHECK_FALSE(is_sum_free({2, 4}));
    CHECK(is_sum_free({1, 4}));
    CHECK(is_sum_free({}));
}

TEST_CASE("tf-template recognition")
{
    CHECK(is_tf_template(with_class({5, 6, 7, 8, 9}), 3));
    CHECK_FALSE(is_tf_template(with_class({3, 6, 9}), 3));
    CHECK_FALSE(is_tf_template(with_class({5, 6, 7, 8}), 3));
    CHECK(phi(with_class({5, 6, 7, 8, 9}), 3) == 4);
    CHECK(phi(with_class({9}), 3) == 8);
    CHECK_THROWS_AS(phi(with_class({}), 3), InvariantError);
    CHECK_THROWS_AS(TemplateGraph(with_class({3, 6, 9})), InvariantError);
}

TEST_CASE("doubling")
{
    auto t = doubled_pentagon();
    CHECK(t.order() == 10);
    CHECK(t.phi() == 4);
    CHECK(t.template_colour() == 3);
    CHECK(t.base().colour_class(1) == std::vector<int>{1, 4});
    CHECK(t.base().colour_class(2) == std::vector<int>{2, 3});
    CHECK(t.base().colour_class(3) == std::vector<int>{5, 6, 7, 8, 9});

    auto e = double_to_template(single_edge());
    CHECK(e.order() == 4);
    CHECK(e.phi() == 1);
    CHECK(e.base().colour_class(1) == std::vector<int>{1});
    CHECK(e.base().colour_class(2) == std::vector<int>{2, 3});

    auto odd = double_to_template(pentagon().to_linear(), DoublingOrder::twice_minus_one);
    CHECK(odd.order() == 9);
    CHECK(odd.phi() == 4);

    auto paley = double_to_template(paley_colouring(17).to_linear());
    CHECK(paley.order() == 34);
    CHECK(paley.phi() == 16);
    CHECK(is_tf_template(paley.base(), paley.template_colour()));
    for (int q = 1; q <= 3; ++q)
        CHECK(repetition_check(paley, q, ParameterVector{{4, 4}}).passes);

    std::mt19937 rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = testing::random_linear(rng, 2 + trial % 9, 1 + trial % 3);
        auto d = double_to_template(g);
        CHECK(is_tf_template(d.base(), d.template_colour()));
        CHECK(d.phi() == g.order() - 1);
    }
}

TEST_CASE("tiling")
{
    auto t = doubled_pentagon();
    auto u2 = tile(t, 2);
    CHECK(u2.order() == 2 * 9 + 1 + 4);
    CHECK(u2.colour_class(1) == std::vector<int>{1, 4, 10, 13, 19, 22});
    CHECK(u2.colour_class(2) == std::vector<int>{2, 3, 11, 12, 20, 21});
    for (int q = 1; q <= 8; ++q) {
        auto u = tile(t, q);
        CHECK(u.order() == q * 9 + 1 + 4);
        CHECK(repetition_check(t, q, ParameterVector{{3, 3}}).passes);
    }
}

TEST_CASE("repetition check on a broken base")
{
    // Colour 1 on lengths 1 and 2: a triangle before any tiling.
    auto broken = TemplateGraph{LengthColouring::linear(4, 2, {1, 1, 2})};
    CHECK_FALSE(repetition_check(broken, 1, ParameterVector{{3}}).passes);
}

TEST_CASE("repeating once matches checking the base")
{
    std::mt19937 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        int m = 3 + trial % 6;
        auto g = testing::random_linear(rng, m, 2);
        auto t = double_to_template(g);
        ParameterVector p{{3, 3}};
        CHECK(repetition_check(t, 1, p).passes == ramsey_check(g, p).passes);
    }
}

TEST_CASE("rainbow prototypes")
{
    for (int n = 2; n <= 8; ++n) {
        auto r = rainbow(n);
        CHECK(r.num_colours() == n - 1);
        ParameterVector threes{std::vector<int>(static_cast<std::size_t>(n - 1), 3)};
        CHECK(ramsey_check(r, threes).passes);
    }
}

TEST_CASE("usefulness")
{
    auto t = doubled_pentagon();
    auto report = check_usefulness(t, ParameterVector{{3, 3}}, {.max_reps = 8, .max_rainbow = 6});
    CHECK(report.passes());
    CHECK(report.repetitions.size() == 8);
    CHECK(report.rainbow_compounds.size() == 5);

    auto broken = TemplateGraph{LengthColouring::linear(4, 2, {1, 1, 2})};
    auto bad = check_usefulness(broken, ParameterVector{{3}});
    CHECK_FALSE(bad.passes());
    CHECK(bad.failing_reps() == 1);
}
