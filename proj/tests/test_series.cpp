#include "branchtor/series.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <random>

using namespace branchtor;

namespace {

TruncatedSeries series(Terms t, int prec) { return TruncatedSeries(std::move(t), prec); }

TruncatedSeries random_unit_series(std::mt19937_64& rng, int prec)
{
    return series(oracle::random_unit(rng, 4, 10), prec);
}

}  // namespace

TEST_CASE("order of a series")
{
    CHECK(series({{3, 1}, {5, 2}}, 10).order() == 3);
    CHECK(series({{0, 1}, {1, 1}}, 10).order() == 0);
    CHECK(is_infinite(TruncatedSeries(20).order()));
}

TEST_CASE("truncated arithmetic")
{
    auto f = series({{0, 1}, {1, 1}}, 5);
    auto g = series({{0, 1}, {1, -1}}, 5);
    CHECK(f * g == series({{0, 1}, {2, -1}}, 5));
    CHECK(f + TruncatedSeries(5) == f);
    CHECK((series({{3, 1}}, 5) * series({{4, 1}}, 5)).is_zero());
    CHECK(series({{3, 1}}, 7) * series({{4, 1}}, 7) == series({{7, 1}}, 7));
}

TEST_CASE("inverse of a unit")
{
    const int B = 12;
    auto inv = invert_unit(series({{0, 1}, {1, 1}}, B));
    for (int k = 0; k <= B; ++k) CHECK(inv.coeff(k) == Rational(k % 2 ? -1 : 1));
    CHECK(invert_unit(TruncatedSeries::constant(2, B)) == TruncatedSeries::constant(Rational(1, 2), B));
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto u = random_unit_series(rng, B);
        CHECK(u * invert_unit(u) == TruncatedSeries::constant(1, B));
    }
}

TEST_CASE("n-th root of a unit against the binomial series")
{
    const int B = 15;
    CHECK(nth_root_unit(TruncatedSeries::constant(1, B), 5) == TruncatedSeries::constant(1, B));
    auto beta = nth_root_unit(series({{0, 1}, {1, 1}}, B), 8);
    CHECK(beta.coeff(1) == Rational(1, 8));
    CHECK(beta.coeff(2) == Rational(-7, 128));
    for (int k = 0; k <= B; ++k) CHECK(beta.coeff(k) == oracle::binomial(Rational(1, 8), k));
    auto p = TruncatedSeries::constant(1, B);
    for (int i = 0; i < 8; ++i) p = p * beta;
    CHECK(p == series({{0, 1}, {1, 1}}, B));
}

TEST_CASE("n-th root round trip on random units")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const int B = 20;
        const int a = 2 + trial % 7;
        auto u = random_unit_series(rng, B);
        auto r = nth_root_unit(u, a);
        auto p = TruncatedSeries::constant(1, B);
        for (int i = 0; i < a; ++i) p = p * r;
        CHECK(p == u);
    }
}

TEST_CASE("substitution")
{
    const int B = 12;
    CHECK(substitute(series({{2, 1}}, B), series({{1, 2}}, B)) == series({{2, 4}}, B));
    auto f = series({{0, 3}, {2, 1}, {5, -2}}, B);
    CHECK(substitute(f, series({{1, 1}}, B)) == f);
    auto beta = nth_root_unit(series({{0, 1}, {1, 1}}, B), 8);
    auto s = beta.shifted(1);
    CHECK(substitute(series({{8, 1}}, B), s) == series({{8, 1}, {9, 1}}, B));
}

TEST_CASE("reversion inverts a change of uniformizer")
{
    const int B = 14;
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        auto s = random_unit_series(rng, B).shifted(1);
        auto t = reversion(s);
        CHECK(substitute(s, t) == series({{1, 1}}, B));
        CHECK(substitute(t, s) == series({{1, 1}}, B));
    }
}

TEST_CASE("derivative and the product rule")
{
    const int B = 10;
    CHECK(derivative(series({{3, 1}}, B)).coeff(2) == 3);
    CHECK(derivative(TruncatedSeries::constant(7, B)).is_zero());
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_unit_series(rng, B);
        auto g = random_unit_series(rng, B);
        auto lhs = derivative(f * g);
        auto rhs = f.with_precision(lhs.precision()) * derivative(g) + g.with_precision(lhs.precision()) * derivative(f);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("rational powers of units")
{
    const int B = 10;
    auto u = series({{0, 1}, {1, 1}}, B);
    auto p = pow_unit(u, Rational(-3, 2));
    for (int k = 0; k <= B; ++k) CHECK(p.coeff(k) == oracle::binomial(Rational(-3, 2), k));
}
