// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when all pass.

#include "branchtor/berger.hpp"
#include "branchtor/report.hpp"
#include "branchtor/search.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace branchtor;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> failures;
    std::string summary;

    void expect(bool ok, const std::string& what)
    {
        if (ok) return;
        pass = false;
        if (failures.size() < 8) failures.push_back(what);
    }
};

// Independent torsion check: sum r_i(t) * y_i'(t) by dense arithmetic, zero below
// the same bound the library uses.
bool oracle_torsion(const DifferentialElement& w)
{
    const Ring& R = *w.ring;
    const int B = R.precision();
    int maxval = 0;
    for (int v : R.valuations()) maxval = std::max(maxval, v);
    const int limit = std::min(B - maxval, B - 1);
    std::vector<Terms> gens;
    for (std::size_t i = 0; i < R.nvars(); ++i) gens.push_back(R.exact(i));
    oracle::Dense acc(static_cast<std::size_t>(B) + 1);
    for (std::size_t i = 0; i < R.nvars(); ++i) {
        if (w.coeffs[i].is_zero()) continue;
        oracle::Dense r = oracle::evaluate(w.coeffs[i], gens, B);
        oracle::Dense dy(static_cast<std::size_t>(B) + 1);
        for (auto& [e, c] : gens[i])
            if (e >= 1 && e - 1 <= B) dy[static_cast<std::size_t>(e - 1)] += c * e;
        oracle::Dense prod = oracle::mul(r, dy);
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += prod[k];
    }
    for (int k = 0; k < limit; ++k)
        if (acc[static_cast<std::size_t>(k)] != 0) return false;
    return true;
}

SearchConfig random_config()
{
    SearchConfig cfg;
    cfg.seed = 2024;
    cfg.n_min = 2;
    cfg.n_max = 4;
    cfg.valuation_min = 2;
    cfg.valuation_max = 30;
    cfg.max_perturbations = 2;
    return cfg;
}

Outcome golden_unit_order()
{
    Outcome o;
    auto start = Clock::now();
    Analysis A = analyze(parse_branch("t^8+t^9; t^9+t^15; t^12+t^20; t^14"), Exec::parallel);
    o.expect(A.conductor == 20, "conductor " + std::to_string(A.conductor));
    auto r = certify(A);
    o.expect(r.outcome == "UNIT_ORDER", "outcome " + r.outcome);
    auto cands = unit_order_candidates(A);
    o.expect(!cands.empty() && cands[0].i + 1 == 3 && cands[0].d + 1 == 3, "(i, d) is not (3, 3)");
    const CriterionReport* fired = r.fired();
    if (fired && fired->id == "UNIT_ORDER" && !fired->evidence.empty()) {
        const Evidence& e = fired->evidence.front();
        int sum = 0, rhs = -1;
        for (auto& [k, v] : e.values) {
            if (k.rfind("o(alpha_", 0) == 0 || k.rfind("a_", 0) == 0) sum += v;
            if (k == "c_R") rhs = v;
        }
        o.expect(e.holds && sum == 20 && rhs == 20, "evidence " + e.instance);
        o.expect(e.instance == "8 + 12 = 20 >= 20", "evidence " + e.instance);
        o.expect(fired->certificate && fired->certificate->verified() && reverify(*fired->certificate),
                 "certificate does not verify");
        o.expect(verify_document(Json::parse(certify_json(r).dump())).ok, "JSON certificate does not verify");
    } else {
        o.expect(false, "no UNIT_ORDER evidence");
    }
    double s = seconds_since(start);
    o.expect(s < 10, "runtime " + std::to_string(s) + " s");
    o.summary = "c_R = " + std::to_string(A.conductor) + ", " + r.outcome + ", " + std::to_string(s) + " s";
    return o;
}

Outcome golden_power(const char* text, int c, int N, double limit)
{
    Outcome o;
    auto start = Clock::now();
    Branch b = parse_branch(text);
    Analysis A = analyze(b, Exec::parallel);
    o.expect(A.conductor == c, "conductor " + std::to_string(A.conductor));
    o.expect(minimal_N(A.conductor, A.a(0)) == N, "N = " + std::to_string(minimal_N(A.conductor, A.a(0))));
    const auto& names = A.R->names();
    std::ostringstream power, mixed;
    power << "x1^" << N - 1;
    mixed << "x1^" << N - 2 << "*x2";
    for (const std::string& m : {power.str(), mixed.str()}) {
        try {
            auto res = mono_support_membership(A.R, A.conductor, parse_monomial(m, names), Exec::parallel);
            o.expect(!res.member, m + " reported in Mono(I)");
        } catch (const UndecidableError& ex) {
            o.expect(false, m + " undecidable: " + ex.what());
        }
    }
    auto r = certify(A);
    o.expect(r.outcome == "M_POWER_N", "outcome " + r.outcome);
    const CriterionReport* fired = r.fired();
    o.expect(fired && fired->certificate && fired->certificate->verified() && reverify(*fired->certificate),
             "certificate does not verify");
    double s = seconds_since(start);
    o.expect(s < limit, "runtime " + std::to_string(s) + " s");
    o.summary = "c_R = " + std::to_string(A.conductor) + ", N = " + std::to_string(N) + ", " + r.outcome + ", " +
                std::to_string(s) + " s";
    return o;
}

Outcome mono_reconstruction()
{
    Outcome o;
    Branch b = parse_branch("t^3; t^4; t^5");
    RingPtr R = Ring::of_branch(b);
    auto rs = relation_search(*R, b.precision, Exec::parallel);
    auto as_row = [&](const Polynomial& p) {
        std::vector<Rational> row(rs.monomials.size());
        for (std::size_t k = 0; k < rs.monomials.size(); ++k) row[k] = p.coeff(rs.monomials[k]);
        return row;
    };
    std::vector<std::vector<Rational>> rows;
    for (auto& p : rs.kernel) {
        o.expect(R->evaluate(p).is_zero(), "kernel element does not vanish: " + p.to_string(R->names()));
        rows.push_back(as_row(p));
    }
    const std::size_t base = oracle::rank(rows);
    for (const char* g : {"x1^3 - x2*x3", "x1^2*x2 - x3^2", "x1*x3 - x2^2"}) {
        auto extended = rows;
        extended.push_back(as_row(parse_polynomial(g, R->names())));
        o.expect(oracle::rank(extended) == base, std::string(g) + " not in the span of the kernel");
    }
    std::vector<Monomial> listed;
    for (const char* g : {"x1^3", "x2*x3", "x1^2*x2", "x3^2", "x1*x3", "x2^2"})
        listed.push_back(parse_monomial(g, R->names()));
    auto K = minimalize(listed, 3);
    int queries = 0;
    for (auto& m : monomials_of_degree_at_most(3, 3)) {
        ++queries;
        try {
            auto res = mono_support_membership(R, 3, m);
            o.expect(res.member == monomial_membership(K, m), "membership of " + monomial_string(m, R->names()));
        } catch (const UndecidableError& ex) {
            o.expect(false, monomial_string(m, R->names()) + " undecidable: " + ex.what());
        }
    }
    o.summary = std::to_string(rs.kernel.size()) + " kernel elements, " + std::to_string(queries) + " queries";
    return o;
}

struct RandomBranch {
    std::string input;
    std::optional<Analysis> analysis;
    std::string error;
};

std::vector<RandomBranch> random_branches(int count)
{
    const SearchConfig cfg = random_config();
    std::vector<RandomBranch> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        auto& rb = out[static_cast<std::size_t>(k)];
        try {
            Branch b = sample_branch(cfg, k);
            rb.input = b.to_string();
            rb.analysis = analyze(b, Exec::parallel);
        } catch (const std::exception& ex) {
            rb.error = ex.what();
        }
    }
    return out;
}

Outcome torsion_suite(const std::vector<RandomBranch>& branches)
{
    Outcome o;
    int checked = 0;
    std::map<std::string, int> per_source;
    for (auto& rb : branches) {
        if (!rb.analysis) {
            o.expect(false, "analysis failed on " + rb.input + ": " + rb.error);
            continue;
        }
        const Analysis& A = *rb.analysis;
        auto check = [&](const std::string& source, const DifferentialElement& w) {
            ++checked;
            ++per_source[source];
            bool lib = torsion_test(w);
            bool ref = oracle_torsion(w);
            o.expect(lib && ref, source + " on " + rb.input + (lib ? " (oracle)" : " (torsion_test)"));
        };
        auto check_cert = [&](const std::string& source, const TorsionCertificate& c) {
            if (!c.element.ring) return;
            check(source, c.element);
            if (c.pullback && c.pullback->explicit_element) check(source + " pullback", *c.pullback->explicit_element);
        };
        try {
            if (A.extension) {
                for (auto& w : gamma_torsions(*A.extension)) check("gamma", w);
                for (auto& w : bracket_torsions(*A.extension)) check("bracket", w);
            }
            check_cert("tau_two_valuations", tau_two_valuations(A));
            check_cert("tau_aN_sum", tau_aN_sum(A));
            const int N = minimal_N(A.conductor, A.a(0));
            if (N >= 2 && A.n() >= 2) {
                MonoData d = mono_data(A, N);
                check_cert("tau_mN", tau_mN(A, d));
                check_cert("tau_lemma_mN", tau_lemma_mN(A, d));
                // the bare element builders, whatever Mono(I) says
                if (A.extension)
                    if (auto w = mN_element(A, N)) check("mN_element", *w);
                if (auto w = lemma_element(A, N)) check("lemma_element", *w);
            }
            if (auto w = wronskian_element(A, false)) check("wronskian R", *w);
            if (A.extension)
                if (auto w = wronskian_element(A, true)) check("wronskian S", *w);
            if (auto w = a1_an_element(A)) check("a1_an_element", *w);
        } catch (const std::exception& ex) {
            o.expect(false, "construction threw on " + rb.input + ": " + ex.what());
        }
    }
    std::ostringstream s;
    s << checked << " elements on " << branches.size() << " branches (";
    bool first = true;
    for (auto& [k, v] : per_source) {
        s << (first ? "" : ", ") << k << " " << v;
        first = false;
    }
    s << ")";
    o.summary = s.str();
    return o;
}

Outcome count_bound_suite(const std::vector<RandomBranch>& branches)
{
    Outcome o;
    int with_extension = 0;
    for (auto& rb : branches) {
        if (!rb.analysis) {
            o.expect(false, "analysis failed on " + rb.input);
            continue;
        }
        const Analysis& A = *rb.analysis;
        if (!A.conductor_in_square) continue;
        if (!A.extension) {
            o.expect(false, "conductor in m^2 but no extension for " + rb.input);
            continue;
        }
        ++with_extension;
        const ExtensionRing& e = *A.extension;
        auto cb = count_bound(e, Exec::parallel);
        const std::size_t want = static_cast<std::size_t>(e.n * e.s + e.s * (e.s - 1) / 2);
        o.expect(cb.bound == want, "bound mismatch on " + rb.input);
        auto family = bracket_torsions(e);
        auto g = gamma_torsions(e);
        family.insert(family.end(), g.begin(), g.end());
        const std::size_t rank = independence_rank(family, square_of_maximal(e.nvars()), Exec::parallel);
        o.expect(std::max(rank, cb.achieved) >= want,
                 rb.input + ": rank " + std::to_string(rank) + " < " + std::to_string(want));
    }
    o.summary = std::to_string(with_extension) + " branches with the conductor in m^2";
    return o;
}

Outcome monomial_criterion_suite()
{
    Outcome o;
    auto start = Clock::now();
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> deg(0, 4), count(0, 6);
    int pairs = 0;
    for (int trial = 0; trial < 200; ++trial) {
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
            if (total_degree(m) >= 1) gens.push_back(m);
        }
        auto K = minimalize(gens, nv);
        QuotientSpec q;
        q.nvars = nv;
        q.monomials = K.generators;
        OmegaOfQuotient omega{ArtinianQuotient(q)};
        for (auto& m : monomials_of_degree_at_most(nv, 4)) {
            if (monomial_membership(K, m)) continue;
            for (std::size_t u = 0; u < nv; ++u) {
                if (m[u] == 0) continue;
                ++pairs;
                std::vector<Polynomial> coeffs(nv, Polynomial(nv));
                coeffs[u] = Polynomial::term(m, 1);
                o.expect(monomial_zero_test(K, m, u) == omega.is_zero(coeffs),
                         "ideal " + std::to_string(trial) + ", m = " + monomial_string(m, default_names(nv)));
            }
        }
    }
    double s = seconds_since(start);
    o.expect(s < 120, "runtime " + std::to_string(s) + " s");
    o.summary = std::to_string(pairs) + " (m, u) pairs on 200 ideals, " + std::to_string(s) + " s";
    return o;
}

Outcome semigroup_suite(const std::vector<RandomBranch>& perturbed)
{
    Outcome o;
    SearchConfig cfg = random_config();
    cfg.seed = 99;
    for (int k = 0; k < 100; ++k) {
        auto vals = sample_valuations(cfg, k);
        std::vector<Terms> gens;
        for (int a : vals) gens.push_back(Terms{{a, Rational(1)}});
        Branch b = make_branch(gens);
        auto vs = value_semigroup(b, Exec::parallel).semigroup;
        auto ref = oracle::numerical_semigroup(vals, vs.precision);
        const int frob = oracle::frobenius(vals);
        std::string label = "valuations";
        for (int a : vals) label += " " + std::to_string(a);
        o.expect(vs.attained == ref, label + ": attained set differs");
        o.expect(vs.conductor == frob + 1, label + ": conductor " + std::to_string(vs.conductor) + " vs " +
                                               std::to_string(frob + 1));
    }
    int closed = 0;
    for (auto& rb : perturbed) {
        if (!rb.analysis) continue;
        const ValueSemigroup& vs = rb.analysis->semigroup;
        std::set<int> att(vs.attained.begin(), vs.attained.end());
        bool ok = true;
        for (int x : vs.attained)
            for (int y : vs.attained)
                if (x + y <= vs.precision && !att.count(x + y)) ok = false;
        for (int v : oracle::numerical_semigroup(rb.analysis->branch.valuations, vs.precision))
            if (!att.count(v)) ok = false;
        o.expect(ok, rb.input + ": attained set not closed or misses a sum of valuations");
        closed += ok;
    }
    o.summary = "100 monomial branches, " + std::to_string(closed) + " perturbed branches closed";
    return o;
}

Outcome round_trip_suite()
{
    Outcome o;
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> root(2, 9);
    const int B = 40;
    for (int trial = 0; trial < 100; ++trial) {
        TruncatedSeries u(oracle::random_unit(rng, 4, 12), B);
        const int a = root(rng);
        auto r = nth_root_unit(u, a);
        auto p = TruncatedSeries::constant(1, B);
        for (int i = 0; i < a; ++i) p = p * r;
        o.expect(p == u, "nth root " + std::to_string(a) + " of " + u.to_string());
    }
    SearchConfig cfg = random_config();
    cfg.seed = 5;
    for (int trial = 0; trial < 100; ++trial) {
        auto vals = sample_valuations(cfg, trial);
        std::vector<Terms> gens;
        for (int a : vals) {
            Terms g;
            for (auto& [e, c] : oracle::random_unit(rng, 2, 8)) g.emplace_back(e + a, c);
            gens.push_back(g);
        }
        Branch b;
        try {
            b = make_branch(gens);
        } catch (const std::exception& ex) {
            o.expect(false, std::string("make_branch: ") + ex.what());
            continue;
        }
        const int d = trial % b.n();
        auto m = monomialize_first(b, d);
        const auto& gd = m.branch.generators[static_cast<std::size_t>(d)];
        o.expect(gd.terms().size() == 1 && gd.order() == b.valuations[static_cast<std::size_t>(d)],
                 b.to_string() + ": generator not monomial");
        for (int i = 0; i < b.n(); ++i)
            o.expect(substitute(m.branch.generators[static_cast<std::size_t>(i)], m.s_of_t) ==
                         b.generators[static_cast<std::size_t>(i)],
                     b.to_string() + ": substitution does not restore generator " + std::to_string(i + 1));
    }
    o.summary = "100 roots, 100 monomializations";
    return o;
}

}  // namespace

int main()
{
    bool all = true;
    auto report = [&](int id, const std::string& name, const std::function<Outcome()>& run) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& ex) {
            o.expect(false, std::string("exception: ") + ex.what());
        }
        all = all && o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name;
        if (!o.summary.empty()) std::cout << ": " << o.summary;
        std::cout << "\n";
        for (auto& f : o.failures) std::cout << "     " << f << "\n";
        std::cout.flush();
    };

    report(1, "unit-order example", golden_unit_order);
    report(2, "m^5 example", [] {
        return golden_power("t^22; t^23+t^27; t^24+t^27; t^25+t^27; t^26+t^27", 110, 5, 300);
    });
    report(3, "m^6 example", [] {
        return golden_power("t^30; t^31+t^36; t^32+t^36; t^33+t^36; t^34+t^36", 180, 6, 900);
    });
    report(4, "Mono(I) reconstruction", mono_reconstruction);

    auto start = Clock::now();
    auto branches = random_branches(50);
    std::cout << "     (50 random branches analyzed in " << seconds_since(start) << " s)\n";
    report(5, "torsion identities", [&] { return torsion_suite(branches); });
    report(6, "count bound", [&] { return count_bound_suite(branches); });
    report(7, "monomial criterion", monomial_criterion_suite);
    report(8, "semigroup soundness", [&] { return semigroup_suite(branches); });
    report(9, "root and substitution round trips", round_trip_suite);
    return all ? 0 : 1;
}
