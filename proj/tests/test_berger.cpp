#include "branchtor/berger.hpp"
#include "branchtor/search.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace branchtor;

namespace {

CertifyReport run(const char* text) { return certify(parse_branch(text), Exec::parallel); }

void check_invariant(const CertifyReport& r)
{
    for (auto& c : r.criteria)
        if (c.fired) {
            REQUIRE(c.certificate);
            CHECK(c.certificate->verified());
            CHECK(reverify(*c.certificate));
        }
    CHECK(r.certified() == (r.fired() != nullptr));
}

}  // namespace

TEST_CASE("unit-order routing on the worked example")
{
    Analysis A = analyze(parse_branch("t^8+t^9; t^9+t^15; t^12+t^20; t^14"));
    auto cands = unit_order_candidates(A);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].i == 2);
    CHECK(cands[0].d == 2);
    CHECK(cands[0].subcase == 1);
    auto r = check_unit_order(A);
    CHECK(r.fired);
    REQUIRE(!r.evidence.empty());
    CHECK(r.evidence[0].instance == "8 + 12 = 20 >= 20");
}

TEST_CASE("constant units skip the unit-order criterion")
{
    Analysis A = analyze(parse_branch("t^3; t^4; t^5"));
    CHECK(unit_order_candidates(A).empty());
    auto r = check_unit_order(A);
    CHECK(!r.applicable);
    CHECK(!r.fired);
}

TEST_CASE("the worked examples certify with the expected criterion")
{
    struct Case {
        const char* text;
        const char* outcome;
    };
    for (auto [text, outcome] : {Case{"t^8+t^9; t^9+t^15; t^12+t^20; t^14", "UNIT_ORDER"},
                                 Case{"t^3; t^4; t^5", "A1_AN"},
                                 Case{"t^4+t^5; t^5+t^6; t^6+t^7", "A1_AN"},
                                 Case{"t^22; t^23+t^27; t^24+t^27; t^25+t^27; t^26+t^27", "M_POWER_N"},
                                 Case{"t^30; t^31+t^36; t^32+t^36; t^33+t^36; t^34+t^36", "M_POWER_N"}}) {
        auto r = run(text);
        CHECK_MESSAGE(r.outcome == outcome, text);
        CHECK(r.certified());
        check_invariant(r);
    }
}

TEST_CASE("small powers of the maximal ideal need no Mono(I) input")
{
    // 3 a_1 >= c_R, so N <= 3
    auto r = run("t^5 + t^8; t^9 - t^20");
    CHECK(r.certified());
    check_invariant(r);
}

TEST_CASE("branches with no applicable criterion are reported as undecided")
{
    auto r = run("t^8; t^13 + 2*t^23; t^30 + t^32 - 2*t^37");
    CHECK(r.outcome == "UNDECIDED");
    CHECK(!r.certified());
    for (auto& c : r.criteria) CHECK(!c.fired);
    bool explained = false;
    for (auto& c : r.criteria) explained = explained || !c.notes.empty();
    CHECK(explained);
}

TEST_CASE("valuation criteria evidence is exact integer arithmetic")
{
    Analysis A = analyze(parse_branch("t^3; t^4; t^5"));
    auto rs = check_valuation_criteria(A);
    REQUIRE(!rs.empty());
    CHECK(rs[0].id == "A1_AN");
    CHECK(rs[0].evidence[0].instance == "3 + 5 = 8 >= 3");
    CHECK(rs[0].fired);
}

TEST_CASE("search is deterministic and its counts add up")
{
    SearchConfig cfg;
    cfg.seed = 42;
    cfg.samples = 8;
    cfg.valuation_max = 16;
    auto a = run_search(cfg, Exec::parallel);
    auto b = run_search(cfg, Exec::serial);
    REQUIRE(a.samples.size() == 8);
    int total = 0;
    for (auto& [k, v] : a.counts) total += v;
    CHECK(total == 8);
    CHECK(a.counts == b.counts);
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        CHECK(a.samples[k].input == b.samples[k].input);
        CHECK(a.samples[k].outcome == b.samples[k].outcome);
    }
}

TEST_CASE("sampled branches respect the configured ranges")
{
    SearchConfig cfg;
    cfg.seed = 3;
    for (int k = 0; k < 30; ++k) {
        Branch b = sample_branch(cfg, k);
        CHECK(b.n() >= cfg.n_min);
        CHECK(b.n() <= cfg.n_max);
        for (int a : b.valuations) {
            CHECK(a >= cfg.valuation_min);
            CHECK(a <= cfg.valuation_max);
        }
        CHECK(b.valuations == sample_valuations(cfg, k));
        for (int j = 0; j < b.n(); ++j) {
            int extra = static_cast<int>(b.units[static_cast<std::size_t>(j)].terms().size()) - 1;
            CHECK(extra <= cfg.max_perturbations);
        }
    }
}

TEST_CASE("a range forcing a_1 + a_n >= c_R gives only A1_AN")
{
    SearchConfig cfg;
    cfg.seed = 9;
    cfg.samples = 10;
    cfg.n_min = 3;
    cfg.n_max = 4;
    cfg.valuation_min = 4;
    cfg.valuation_max = 7;
    cfg.max_perturbations = 0;
    auto s = run_search(cfg);
    CHECK(s.counts.size() == 1);
    CHECK(s.counts["A1_AN"] == 10);
    CHECK(s.undecided_rate() == 0.0);
}
