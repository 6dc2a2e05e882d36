#include "branchtor/ideals.hpp"

#include "branchtor/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace branchtor {

bool MonomialIdeal::contains(const Monomial& m) const
{
    return monomial_membership(*this, m);
}

bool MonomialIdeal::is_unit() const
{
    for (auto& g : generators)
        if (total_degree(g) == 0) return true;
    return false;
}

std::string MonomialIdeal::to_string(const std::vector<std::string>& names) const
{
    std::ostringstream os;
    os << "(";
    for (std::size_t k = 0; k < generators.size(); ++k) os << (k ? ", " : "") << monomial_string(generators[k], names);
    os << ")";
    return os.str();
}

MonomialIdeal minimalize(std::vector<Monomial> gens, std::size_t nvars)
{
    for (auto& g : gens)
        if (g.size() != nvars) throw std::invalid_argument("minimalize: monomial has wrong variable count");
    std::sort(gens.begin(), gens.end(), GrlexLess());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    MonomialIdeal K;
    K.nvars = nvars;
    // a divisor always precedes its multiples in graded order
    for (auto& g : gens) {
        bool redundant = std::any_of(K.generators.begin(), K.generators.end(),
                                     [&](const Monomial& h) { return divides(h, g); });
        if (!redundant) K.generators.push_back(g);
    }
    return K;
}

bool monomial_membership(const MonomialIdeal& K, const Monomial& m)
{
    if (m.size() != K.nvars) throw std::invalid_argument("monomial_membership: dimension mismatch");
    return std::any_of(K.generators.begin(), K.generators.end(), [&](const Monomial& g) { return divides(g, m); });
}

RelationSearch relation_search(const Ring& ring, int bound, Exec exec)
{
    if (bound > ring.precision()) throw PrecisionError("relation_search: bound exceeds precision");
    RelationSearch rs;
    rs.monomials = monomials_up_to(ring.valuations(), bound);
    std::sort(rs.monomials.begin(), rs.monomials.end(), GrlexLess());
    auto series = monomial_series_table(ring, rs.monomials, exec);
    Echelon e(bound + 1, true, exec);
    for (std::size_t k = 0; k < rs.monomials.size(); ++k) {
        auto out = e.insert(series_vector(series[k].with_precision(bound)), static_cast<int>(k), true);
        if (!out.new_pivot) {
            Polynomial p(ring.nvars());
            for (auto& [id, c] : out.kernel) p.add_term(rs.monomials[id], c);
            rs.kernel.push_back(std::move(p));
        }
    }
    rs.rank = e.rank();
    return rs;
}

const char* to_string(Support s)
{
    switch (s) {
    case Support::yes: return "yes";
    case Support::no: return "no";
    default: return "undecided";
    }
}

SupportOracle::SupportOracle(RingPtr ring, int conductor, std::vector<Monomial> candidates, Exec exec)
    : ring_(std::move(ring)), conductor_(conductor), candidates_(std::move(candidates)), exec_(exec)
{
    const int B = ring_->precision();
    std::set<Monomial> excluded(candidates_.begin(), candidates_.end());
    for (auto& m : monomials_up_to(ring_->valuations(), B))
        if (!excluded.count(m)) others_.push_back(m);
    std::sort(others_.begin(), others_.end(), GrlexLess());
    auto series = monomial_series_table(*ring_, others_, exec);
    std::vector<int> ids(series.size());
    for (std::size_t k = 0; k < series.size(); ++k) {
        other_vectors_.push_back(series_vector(series[k]));
        ids[k] = static_cast<int>(k);
    }
    Echelon base(B + 1, false, exec);
    base.insert_batch(other_vectors_, ids);

    // m lies in the support of a relation iff some relation among the
    // candidates modulo the others involves m; the union of supports of a
    // kernel basis does not depend on the basis chosen
    Echelon quotient(B + 1, true);
    in_span_.assign(candidates_.size(), 0);
    for (std::size_t q = 0; q < candidates_.size(); ++q) {
        candidate_vectors_.push_back(series_vector(ring_->monomial_series(candidates_[q])));
        std::vector<Rational> d(static_cast<std::size_t>(B + 1));
        for (auto& [i, c] : candidate_vectors_.back()) d[static_cast<std::size_t>(i)] = c;
        base.reduce(d);
        auto out = quotient.insert(std::move(d), static_cast<int>(q), true);
        if (out.new_pivot) continue;
        for (auto& [id, c] : out.kernel) in_span_[static_cast<std::size_t>(id)] = 1;
        kernel_.push_back(std::move(out.kernel));
    }
}

int SupportOracle::index_of(const Monomial& m) const
{
    auto it = std::find(candidates_.begin(), candidates_.end(), m);
    if (it == candidates_.end()) throw std::invalid_argument("monomial is not an oracle candidate");
    return static_cast<int>(it - candidates_.begin());
}

bool SupportOracle::in_span(const Monomial& m) const { return in_span_[static_cast<std::size_t>(index_of(m))]; }

Support SupportOracle::in_support(const Monomial& m) const
{
    if (!in_span(m)) return Support::no;  // sound at any valuation
    if (ring_->valuation(m) < conductor_) return Support::yes;
    auto w = witness(m);
    try {
        if (w && ring_->evaluate_exact(*w).empty()) return Support::yes;
    } catch (const PrecisionError&) {
    }
    return Support::undecided;
}

const Echelon& SupportOracle::tracked_others() const
{
    std::call_once(tracked_once_, [&] {
        std::vector<int> ids(other_vectors_.size());
        std::iota(ids.begin(), ids.end(), 0);
        tracked_ = Echelon(ring_->precision() + 1, true, exec_);
        tracked_.insert_batch(other_vectors_, ids);
    });
    return tracked_;
}

std::optional<Polynomial> SupportOracle::witness(const Monomial& m) const
{
    const int k = index_of(m);
    const SparseVec* relation = nullptr;
    for (auto& kv : kernel_)
        if (!branchtor::is_zero(sparse_get(kv, k))) {
            relation = &kv;
            break;
        }
    if (!relation) return std::nullopt;
    const Echelon& e = tracked_others();
    // sum c_q Phi(candidate_q) lies in the span of the others; express it there
    std::vector<Rational> d(static_cast<std::size_t>(e.length()));
    Polynomial f(ring_->nvars());
    for (auto& [q, c] : *relation) {
        f.add_term(candidates_[static_cast<std::size_t>(q)], c);
        for (auto& [i, v] : candidate_vectors_[static_cast<std::size_t>(q)]) d[static_cast<std::size_t>(i)] += c * v;
    }
    auto mult = e.reduce(d);
    SparseVec combo;
    for (auto& [r, c] : mult) sparse_axpy(combo, -c, e.rows()[static_cast<std::size_t>(r)].combo);
    for (auto& [id, c] : combo) f.add_term(others_[static_cast<std::size_t>(id)], -c);
    return f;
}

std::vector<Monomial> divisors_of_degree_at_least(const Monomial& m, int degree)
{
    std::vector<Monomial> out;
    Monomial cur(m.size(), 0);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == m.size()) {
            if (total_degree(cur) >= degree) out.push_back(cur);
            return;
        }
        for (int e = 0; e <= m[i]; ++e) {
            cur[i] = e;
            self(self, i + 1);
        }
        cur[i] = 0;
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end(), GrlexLess());
    return out;
}

MembershipResult membership_from_oracle(const SupportOracle& oracle, const Ring& ring, int conductor,
                                        const Monomial& m)
{
    if (m.size() != ring.nvars()) throw std::invalid_argument("membership: dimension mismatch");
    MembershipResult r;
    r.tested_divisors = divisors_of_degree_at_least(m, 2);
    std::vector<Monomial> unsettled;
    for (auto& d : r.tested_divisors) {
        Support s = oracle.in_support(d);
        if (s == Support::yes) {
            r.member = true;
            r.divisor = d;
            r.witness = oracle.witness(d);
            try {
                r.witness_exact = r.witness && ring.evaluate_exact(*r.witness).empty();
            } catch (const PrecisionError&) {
                r.witness_exact = false;
            }
            return r;
        }
        if (s == Support::undecided) unsettled.push_back(d);
    }
    if (!unsettled.empty())
        throw UndecidableError("undecidable at this precision for this monomial: divisor " +
                               monomial_string(unsettled.front(), ring.names()) + " has valuation " +
                               std::to_string(ring.valuation(unsettled.front())) + " >= c_R = " +
                               std::to_string(conductor));
    return r;
}

MembershipResult mono_support_membership(RingPtr ring, int conductor, const Monomial& m, Exec exec)
{
    if (m.size() != ring->nvars()) throw std::invalid_argument("mono_support_membership: dimension mismatch");
    auto divisors = divisors_of_degree_at_least(m, 2);
    if (divisors.empty()) return MembershipResult{};
    SupportOracle oracle(ring, conductor, divisors, exec);
    return membership_from_oracle(oracle, *ring, conductor, m);
}

}  // namespace branchtor
