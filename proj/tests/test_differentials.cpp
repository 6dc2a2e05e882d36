#include "branchtor/differentials.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <random>

using namespace branchtor;

namespace {

RingPtr ring_345() { return Ring::of_branch(parse_branch("t^3; t^4; t^5")); }

DifferentialElement element(RingPtr R, std::vector<std::string> coeffs)
{
    std::vector<Polynomial> p;
    for (auto& c : coeffs) p.push_back(parse_polynomial(c, R->names()));
    return DifferentialElement(R, std::move(p));
}

QuotientSpec monomial_spec(std::size_t nv, std::vector<Monomial> monos)
{
    QuotientSpec q;
    q.nvars = nv;
    q.monomials = std::move(monos);
    return q;
}

QuotientSpec mono_345()
{
    std::vector<std::string> names{"x1", "x2", "x3"};
    std::vector<Monomial> gens;
    for (const char* g : {"x1^3", "x2*x3", "x1^2*x2", "x3^2", "x1*x3", "x2^2"}) gens.push_back(parse_monomial(g, names));
    return monomial_spec(3, gens);
}

}  // namespace

TEST_CASE("torsion identity")
{
    RingPtr R = ring_345();
    CHECK(torsion_test(element(R, {"-5*x3", "0", "3*x1"})));
    CHECK(!torsion_test(element(R, {"1", "0", "0"})));
    CHECK(torsion_test(element(R, {"x2 - x2", "0", "0"})));
}

TEST_CASE("artinian quotients")
{
    ArtinianQuotient m2(square_of_maximal(3));
    CHECK(m2.dimension() == 4);
    ArtinianQuotient q(monomial_spec(2, {{2, 0}, {0, 2}}));
    std::set<Monomial> basis(q.basis().begin(), q.basis().end());
    CHECK(basis == std::set<Monomial>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});

    ArtinianQuotient a(monomial_spec(3, {{3, 0, 0}, {0, 3, 0}, {0, 0, 2}, {1, 1, 1}}));
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> pick(0, a.dimension() - 1);
    auto unit = [&](std::size_t k) {
        std::vector<Rational> v(a.dimension());
        v[k] = 1;
        return v;
    };
    for (int trial = 0; trial < 30; ++trial) {
        auto x = unit(pick(rng)), y = unit(pick(rng)), z = unit(pick(rng));
        CHECK(a.multiply(a.multiply(x, y), z) == a.multiply(x, a.multiply(y, z)));
    }
    CHECK_THROWS(ArtinianQuotient(monomial_spec(2, {{2, 0}})));
}

TEST_CASE("Omega of small quotients")
{
    OmegaOfQuotient line(ArtinianQuotient(monomial_spec(1, {{2}})));
    CHECK(line.dimension() == 1);

    for (std::size_t n = 2; n <= 4; ++n) {
        RingPtr R = std::make_shared<Ring>("R", default_names(n), std::vector<Terms>(n, Terms{{1, 1}}), 4);
        std::vector<DifferentialElement> ws;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                DifferentialElement w(R);
                w.coeffs[j] = Polynomial::variable(n, i);
                ws.push_back(w);
            }
        CHECK(independence_rank(ws, square_of_maximal(n)) == n * (n - 1) / 2);
        ws.push_back(ws.front());
        CHECK(independence_rank(ws, square_of_maximal(n)) == n * (n - 1) / 2);
    }
}

TEST_CASE("classes modulo Mono(I) for t^3, t^4, t^5")
{
    RingPtr R = ring_345();
    QuotientSpec J = mono_345();
    CHECK(class_nonzero_mod(element(R, {"0", "0", "x1"}), J));
    CHECK(class_nonzero_mod(element(R, {"-5*x3", "0", "3*x1"}), J));
    CHECK(!class_nonzero_mod(element(R, {"x1^3", "x2^2", "x1*x3"}), J));
}

TEST_CASE("monomial criterion")
{
    auto K1 = minimalize({{2, 0}, {0, 2}}, 2);
    CHECK(monomial_zero_test(K1, {1, 1}, 0));
    auto K2 = minimalize({{0, 2}, {3, 0}}, 2);
    CHECK(!monomial_zero_test(K2, {1, 1}, 0));
    oracle::MonomialOmega omega({{0, 2}, {3, 0}}, 2);
    CHECK(!omega.zero({1, 1}, 0));
}

TEST_CASE("monomial criterion agrees with the quotient computation on random ideals")
{
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> deg(0, 4), count(1, 5);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t nv = 1 + static_cast<std::size_t>(trial % 3);
        std::vector<Monomial> gens;
        for (std::size_t i = 0; i < nv; ++i) {
            Monomial p(nv, 0);
            p[i] = 5;
            gens.push_back(p);
        }
        int extra = count(rng);
        for (int k = 0; k < extra; ++k) {
            Monomial m(nv);
            for (auto& e : m) e = deg(rng);
            if (total_degree(m) >= 2) gens.push_back(m);
        }
        auto K = minimalize(gens, nv);
        oracle::MonomialOmega omega(K.generators, nv);
        OmegaOfQuotient lib(ArtinianQuotient(monomial_spec(nv, K.generators)));
        for (auto& m : monomials_of_degree_at_most(nv, 4)) {
            if (monomial_membership(K, m)) continue;
            for (std::size_t u = 0; u < nv; ++u) {
                if (m[u] == 0) continue;
                bool expected = omega.zero(m, u);
                CHECK(monomial_zero_test(K, m, u) == expected);
                std::vector<Polynomial> coeffs(nv, Polynomial(nv));
                coeffs[u] = Polynomial::term(m, 1);
                CHECK(lib.is_zero(coeffs) == expected);
            }
        }
    }
}
