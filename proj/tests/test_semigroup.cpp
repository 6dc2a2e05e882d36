#include "branchtor/ring.hpp"
#include "branchtor/semigroup.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <random>

using namespace branchtor;

TEST_CASE("numerical semigroups by brute force")
{
    auto s = numerical_semigroup({3, 4, 5});
    CHECK(s.frobenius == 2);
    CHECK(numerical_semigroup({2, 3}).frobenius == 1);
    CHECK(numerical_semigroup({8, 9, 12, 14}).frobenius == oracle::frobenius({8, 9, 12, 14}));
    CHECK(oracle::frobenius({8, 9, 12, 14}) >= 19);
}

TEST_CASE("value semigroup of monomial branches")
{
    auto r = value_semigroup(parse_branch("t^3; t^4; t^5"));
    CHECK(r.semigroup.conductor == 3);
    CHECK(r.semigroup.gaps == std::vector<int>{1, 2});
    CHECK(extension_gaps(r.semigroup, 3) == std::vector<int>{1, 2});
    CHECK(r.semigroup.attained == oracle::numerical_semigroup({3, 4, 5}, r.semigroup.precision));
}

TEST_CASE("conductors of the worked examples")
{
    auto e = value_semigroup(parse_branch("t^8+t^9; t^9+t^15; t^12+t^20; t^14"));
    CHECK(e.semigroup.conductor == 20);
    CHECK(e.semigroup.contains(19) == false);
    auto gaps = extension_gaps(e.semigroup, 8);
    for (int b : gaps) {
        CHECK(b >= 12);
        CHECK(b < 20);
        CHECK(!e.semigroup.contains(b));
    }
    CHECK(value_semigroup(parse_branch("t^22; t^23+t^27; t^24+t^27; t^25+t^27; t^26+t^27")).semigroup.conductor == 110);
}

TEST_CASE("conductor minus one is never attained")
{
    for (const char* text : {"t^3; t^4; t^5", "t^4+t^5; t^5+t^6; t^6+t^7", "t^5 + t^7; t^7 - t^9; t^11"}) {
        auto r = value_semigroup(parse_branch(text));
        CHECK(!r.semigroup.gaps.empty());
        CHECK(r.semigroup.gaps.back() == r.semigroup.conductor - 1);
    }
}

TEST_CASE("perturbed branches: attained values are closed and contain the numerical semigroup")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Terms> gens;
        for (int a : {4, 6, 7}) {
            Terms u = oracle::random_unit(rng, 2, 5);
            Terms g;
            for (auto& [e, c] : u) g.emplace_back(e + a, c);
            gens.push_back(g);
        }
        Branch b;
        try {
            b = make_branch(gens);
        } catch (const BranchError&) {
            continue;
        }
        auto r = value_semigroup(b);
        const auto& at = r.semigroup.attained;
        std::set<int> s(at.begin(), at.end());
        for (int v : oracle::numerical_semigroup(b.valuations, b.precision)) CHECK(s.count(v));
        for (int x : at)
            for (int y : at)
                if (x + y <= b.precision) CHECK(s.count(x + y));
    }
}

TEST_CASE("division by the staircase")
{
    Branch b = parse_branch("t^3; t^4; t^5");
    auto r = value_semigroup(b);
    const Ring& R = r.staircase->ring();
    auto sq = R.monomial_series({2, 0, 0});
    auto d = divide_by_staircase(sq, *r.staircase);
    CHECK(d.residual.is_zero());
    CHECK(R.evaluate(d.expression) == sq);
    auto c = divide_by_staircase(TruncatedSeries({{3, 1}}, b.precision), *r.staircase);
    CHECK(c.expression == Polynomial::variable(3, 0));

    Branch e = parse_branch("t^8+t^9; t^9+t^15; t^12+t^20; t^14");
    auto re = value_semigroup(e);
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> coef(-4, 4);
    for (int trial = 0; trial < 10; ++trial) {
        Terms sigma;
        for (int k = 20; k <= e.precision; k += 1 + trial % 3) sigma.emplace_back(k, coef(rng));
        std::erase_if(sigma, [](auto& t) { return t.second == 0; });
        TruncatedSeries s(sigma, e.precision);
        auto div = divide_by_staircase(s, *re.staircase);
        auto back = oracle::evaluate(div.expression, e.exact, e.precision);
        CHECK(TruncatedSeries::from_dense(back, e.precision) + div.residual == s);
        CHECK(div.residual.is_zero());
    }
    CHECK_THROWS_AS(divide_by_staircase(TruncatedSeries({{19, 1}}, e.precision), *re.staircase), DivisionError);
}
