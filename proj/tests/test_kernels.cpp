#include "branchtor/kernels.hpp"
#include "branchtor/semigroup.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <random>

using namespace branchtor;

namespace {

std::vector<SparseVec> random_vectors(std::mt19937_64& rng, int count, int length, int density)
{
    std::uniform_int_distribution<int> coef(-5, 5), pos(0, length - 1);
    std::vector<SparseVec> out;
    for (int k = 0; k < count; ++k) {
        std::vector<Rational> d(static_cast<std::size_t>(length));
        for (int j = 0; j < density; ++j) d[static_cast<std::size_t>(pos(rng))] = coef(rng);
        out.push_back(to_sparse(d));
    }
    return out;
}

std::vector<Rational> dense(const SparseVec& v, int length)
{
    std::vector<Rational> d(static_cast<std::size_t>(length));
    for (auto& [i, c] : v) d[static_cast<std::size_t>(i)] = c;
    return d;
}

}  // namespace

TEST_CASE("echelon rank matches plain elimination")
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const int len = 30;
        auto vs = random_vectors(rng, 40, len, 3 + trial);
        Echelon e(len, false);
        for (std::size_t k = 0; k < vs.size(); ++k) e.insert(vs[k], static_cast<int>(k));
        std::vector<std::vector<Rational>> rows;
        for (auto& v : vs) rows.push_back(dense(v, len));
        CHECK(e.rank() == oracle::rank(rows));
    }
}

TEST_CASE("kernel combinations really vanish")
{
    std::mt19937_64 rng(8);
    const int len = 12;
    auto vs = random_vectors(rng, 20, len, 4);
    Echelon e(len, true);
    for (std::size_t k = 0; k < vs.size(); ++k) {
        auto out = e.insert(vs[k], static_cast<int>(k), true);
        if (out.new_pivot) continue;
        std::vector<Rational> sum(len);
        for (auto& [id, c] : out.kernel)
            for (auto& [i, x] : vs[static_cast<std::size_t>(id)]) sum[static_cast<std::size_t>(i)] += c * x;
        CHECK(oracle::all_zero(sum));
        CHECK(!out.kernel.empty());
    }
}

TEST_CASE("batched insertion agrees with the serial reference")
{
    std::mt19937_64 rng(6);
    const int len = 60;
    auto vs = random_vectors(rng, 300, len, 5);
    std::vector<int> ids(vs.size());
    for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = static_cast<int>(k);
    Echelon a(len, true, Exec::serial), b(len, true, Exec::parallel);
    auto oa = a.insert_batch(vs, ids, true);
    auto ob = b.insert_batch(vs, ids, true);
    REQUIRE(oa.size() == ob.size());
    for (std::size_t k = 0; k < oa.size(); ++k) {
        CHECK(oa[k].new_pivot == ob[k].new_pivot);
        CHECK(oa[k].kernel == ob[k].kernel);
    }
    CHECK(reduce_batch(a, vs, Exec::serial) == reduce_batch(b, vs, Exec::parallel));
}

TEST_CASE("monomial images agree with naive expansion, serial and parallel")
{
    Branch b = parse_branch("t^5 + t^7; t^7 - 2*t^9; t^11 + t^12");
    RingPtr ring = Ring::of_branch(b);
    auto monos = monomials_up_to(b.valuations, b.precision);
    auto serial = monomial_series_table(*ring, monos, Exec::serial);
    auto parallel = monomial_series_table(*ring, monos, Exec::parallel);
    CHECK(serial == parallel);
    for (std::size_t k = 0; k < monos.size(); k += 7) {
        auto naive = oracle::evaluate(Polynomial::term(monos[k], 1), b.exact, b.precision);
        CHECK(serial[k] == TruncatedSeries::from_dense(naive, b.precision));
    }
}

TEST_CASE("staircase pivots do not depend on the execution policy")
{
    Branch b = parse_branch("t^8+t^9; t^9+t^15; t^12+t^20; t^14");
    auto order = staircase_order(*Ring::of_branch(b), 4, {});
    auto s = build_staircase(Ring::of_branch(b), order, Exec::serial);
    auto p = build_staircase(Ring::of_branch(b), order, Exec::parallel);
    CHECK(s.pivots() == p.pivots());
    for (int v : s.pivots()) CHECK(s.representative(v) == p.representative(v));
}
