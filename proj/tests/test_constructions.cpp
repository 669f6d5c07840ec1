#include "support.hpp"

#include <ramsey/cliques.hpp>
#include <ramsey/constructions.hpp>
#include <ramsey/error.hpp>
#include <ramsey/templates.hpp>

#include <doctest.h>

#include <algorithm>

using namespace ramsey;

namespace
{
    auto threes(int r) -> ParameterVector
    {
        return ParameterVector{std::vector<int>(static_cast<std::size_t>(r), 3)};
    }

    // Colour classes closed under no x + y = z, checked directly on lengths.
    auto sum_free_classes(const LengthColouring & c) -> bool
    {
        for (Colour s = 1; s <= c.num_colours(); ++s)
            if (! is_sum_free(c.colour_class(s)))
                return false;
        return true;
    }
}

TEST_CASE("order formulas")
{
    CHECK(product_order(2, 2) == 5);
    CHECK(product_order(5, 2) == 14);
    CHECK(product_order(5, 5) == 41);
    CHECK(product_order(16, 5) == 140);
    CHECK(template_compound_order(10, 2, 4) == 14);
    CHECK(template_compound_order(10, 5, 4) == 41);
    CHECK(template_compound_order(4, 2, 1) == 5);
}

TEST_CASE("product chain from the single edge")
{
    auto edge = single_edge();
    auto c5 = product_linear(edge, edge);
    CHECK(c5.order() == 5);
    CHECK(c5.colour_class(1) == std::vector<int>{1, 4});
    CHECK(c5.colour_class(2) == std::vector<int>{2, 3});
    CHECK(sum_free_classes(c5));

    auto c14 = product_linear(pentagon().to_linear(), edge);
    CHECK(c14.order() == 14);
    CHECK(c14.colour_class(1) == std::vector<int>{1, 4, 10, 13});
    CHECK(c14.colour_class(2) == std::vector<int>{2, 3, 11, 12});
    CHECK(c14.colour_class(3) == std::vector<int>{5, 6, 7, 8, 9});
    CHECK(sum_free_classes(c14));
    CHECK(ramsey_check(c14, threes(3)).passes);

    auto c41 = product_linear(c5, c5);
    CHECK(c41.order() == 41);
    CHECK(ramsey_check(c41, threes(4)).passes);
}

TEST_CASE("cyclic products")
{
    auto p41 = product_cyclic(pentagon(), pentagon());
    CHECK(p41.is_cyclic());
    CHECK(p41.order() == 41);
    CHECK(ramsey_check(p41, threes(4)).passes);

    auto edge = to_cyclic(single_edge()).value();
    auto p14 = product_cyclic(pentagon(), edge);
    CHECK(p14.order() == 14);
    CHECK(check_cyclic_symmetry(p14.to_linear()));

    CHECK_THROWS_AS(product_cyclic(pentagon().to_linear(), pentagon()), InvariantError);
}

TEST_CASE("products of cyclic colourings are cyclic")
{
    // Every cyclic colouring with up to two colours, orders 2..9.
    std::vector<LengthColouring> inputs;
    for (int m = 2; m <= 9; ++m)
        for (int r = 1; r <= 2; ++r) {
            int half = m / 2;
            for (int mask = 0; mask < (1 << half); ++mask) {
                std::vector<Colour> c(static_cast<std::size_t>(half));
                for (int i = 0; i < half; ++i)
                    c[static_cast<std::size_t>(i)] = r == 1 ? 1 : (mask >> i & 1) + 1;
                inputs.push_back(LengthColouring::cyclic(m, r, c));
                if (r == 1)
                    break;
            }
        }
    int count = 0;
    for (const auto & a : inputs)
        for (const auto & b : inputs) {
            REQUIRE(check_cyclic_symmetry(product_linear(a.to_linear(), b.to_linear())));
            ++count;
        }
    CHECK(count > 1000);
}

TEST_CASE("products of passing inputs pass the concatenated vector")
{
    std::vector<LengthColouring> passing;
    for (int m = 2; m <= 13; ++m)
        for (int r = 1; r <= 2; ++r) {
            std::mt19937 rng(static_cast<unsigned>(m * 10 + r));
            for (int trial = 0; trial < 400; ++trial) {
                auto c = testing::random_linear(rng, m, r);
                if (ramsey_check(c, threes(r)).passes)
                    passing.push_back(c);
            }
        }
    passing.push_back(product_linear(pentagon().to_linear(), single_edge()));
    REQUIRE(passing.size() > 20);

    std::mt19937 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const auto & a = passing[rng() % passing.size()];
        const auto & b = passing[rng() % passing.size()];
        auto p = threes(a.num_colours()).concat(threes(b.num_colours()));
        auto c = product_linear(a, b);
        REQUIRE(c.order() == product_order(a.order(), b.order()));
        REQUIRE(ramsey_check(c, p).passes);
        auto t = double_to_template(a);
        auto d = template_compound(t, b);
        REQUIRE(d.order() == template_compound_order(t.order(), b.order(), t.phi()));
        REQUIRE(ramsey_check(d, p).passes);
    }
}

TEST_CASE("template compounds")
{
    auto t = double_to_template(pentagon().to_linear());
    auto c14 = template_compound(t, single_edge());
    CHECK(c14.order() == 14);
    CHECK(c14 == product_linear(pentagon().to_linear(), single_edge()));

    auto c41 = template_compound(t, pentagon().to_linear());
    CHECK(c41.order() == 41);
    CHECK(ramsey_check(c41, threes(4)).passes);

    auto e = double_to_template(single_edge());
    auto c5 = template_compound(e, single_edge());
    CHECK(c5.order() == 5);
    CHECK(max_clique_brute(expand_to_explicit(c5), 1) == 2);
    CHECK(max_clique_brute(expand_to_explicit(c5), 2) == 2);
}

TEST_CASE("doubling then compounding reproduces the product")
{
    std::vector<LengthColouring> inputs;
    for (int m = 2; m <= 7; ++m)
        for (int r = 1; r <= 3; ++r)
            for (const auto & c : testing::all_linear(m, r))
                if (ramsey_check(c, threes(r)).passes)
                    inputs.push_back(c);
    std::mt19937 rng(7);
    std::shuffle(inputs.begin(), inputs.end(), rng);
    if (inputs.size() > 300)
        inputs.erase(inputs.begin() + 300, inputs.end());

    std::size_t pairs = 0;
    for (const auto & a : inputs) {
        auto t = double_to_template(a);
        for (std::size_t j = 0; j < inputs.size(); j += 5) {
            REQUIRE(template_compound(t, inputs[j]) == product_linear(a, inputs[j]));
            ++pairs;
        }
    }
    CHECK(pairs > 10000);
}

TEST_CASE("grid product")
{
    auto g = expand_to_explicit(pentagon());
    auto s = song_product(g, g);
    CHECK(s.order() == 25);
    auto p = song_avoid(ParameterVector{{3, 3}}, ParameterVector{{3, 3}});
    CHECK(p == ParameterVector{{5, 5}});
    CHECK(ramsey_check(s, p).passes);
    CHECK(max_clique_in_colour(s, 1).size == 4);

    ExplicitColouring k3(3, 1, 1);
    auto nine = song_product(k3, k3);
    CHECK(nine.order() == 9);
    CHECK(ramsey_check(nine, song_avoid(ParameterVector{{4}}, ParameterVector{{4}})).passes);

    CHECK_THROWS_AS(song_product(k3, g), ArityMismatch);
}

TEST_CASE("paley colourings")
{
    CHECK(paley_colouring(5) == pentagon());
    auto p13 = paley_colouring(13);
    CHECK(p13.colour_class(1).size() == 6);
    auto g17 = expand_to_explicit(paley_colouring(17));
    CHECK(max_clique_brute(g17, 1, 17) == 3);
    CHECK(max_clique_brute(g17, 2, 17) == 3);
    CHECK_THROWS_AS(paley_colouring(15), InvariantError);
    CHECK_THROWS_AS(paley_colouring(7), InvariantError);
    CHECK(is_prime(13));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(91));
}
