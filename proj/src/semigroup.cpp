#include "branchtor/semigroup.hpp"

#include "branchtor/kernels.hpp"

#include <algorithm>

namespace branchtor {

bool ValueSemigroup::contains(int v) const
{
    if (v < 0) return false;
    if (v >= conductor) return true;
    return std::binary_search(attained.begin(), attained.end(), v);
}

StaircaseBasis::StaircaseBasis(RingPtr ring, std::vector<Monomial> sources, Echelon echelon)
    : ring_(std::move(ring)), sources_(std::move(sources)), echelon_(std::move(echelon))
{
}

bool StaircaseBasis::attained(int v) const
{
    return v >= 0 && v < echelon_.length() && echelon_.is_pivot(v);
}

std::vector<int> StaircaseBasis::pivots() const
{
    std::vector<int> out;
    for (int v = 0; v < echelon_.length(); ++v)
        if (echelon_.is_pivot(v)) out.push_back(v);
    return out;
}

Polynomial StaircaseBasis::combination(const SparseVec& combo) const
{
    Polynomial p(ring_->nvars());
    for (auto& [id, c] : combo) p.add_term(sources_.at(id), c);
    return p;
}

Polynomial StaircaseBasis::representative(int v) const
{
    if (!attained(v)) throw DivisionError("valuation " + std::to_string(v) + " is not attained");
    return combination(echelon_.rows()[echelon_.row_of(v)].combo);
}

TruncatedSeries StaircaseBasis::representative_series(int v) const
{
    if (!attained(v)) throw DivisionError("valuation " + std::to_string(v) + " is not attained");
    auto& row = echelon_.rows()[echelon_.row_of(v)];
    return TruncatedSeries(Terms(row.entries.begin(), row.entries.end()), precision());
}

std::vector<Monomial> staircase_order(const Ring& ring, std::size_t linear_vars, const std::vector<Monomial>& extra_last)
{
    const std::size_t nv = ring.nvars();
    std::vector<int> w(ring.valuations().begin(), ring.valuations().begin() + linear_vars);
    std::vector<Monomial> order, linear;
    for (auto& m : monomials_up_to(w, ring.precision())) {
        Monomial full(nv, 0);
        std::copy(m.begin(), m.end(), full.begin());
        if (total_degree(full) == 1)
            linear.push_back(full);
        else
            order.push_back(full);
    }
    std::sort(order.begin(), order.end(), GrlexLess());
    std::sort(linear.begin(), linear.end(), GrlexLess());
    order.insert(order.end(), linear.begin(), linear.end());
    order.insert(order.end(), extra_last.begin(), extra_last.end());
    return order;
}

StaircaseBasis build_staircase(RingPtr ring, const std::vector<Monomial>& order, Exec exec)
{
    const int B = ring->precision();
    auto series = monomial_series_table(*ring, order, exec);
    std::vector<SparseVec> vs(order.size());
    std::vector<int> ids(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        vs[k] = series_vector(series[k]);
        ids[k] = static_cast<int>(k);
    }
    Echelon e(B + 1, true, exec);
    e.insert_batch(vs, ids);
    return StaircaseBasis(std::move(ring), order, std::move(e));
}

StaircaseBasis extend_staircase(const StaircaseBasis& base, RingPtr ring, const std::vector<Monomial>& extra, Exec exec)
{
    if (ring->precision() != base.precision()) throw PrecisionError("extend_staircase: precision mismatch");
    std::vector<Monomial> sources;
    sources.reserve(base.sources().size() + extra.size());
    for (auto& m : base.sources()) {
        Monomial w(ring->nvars(), 0);
        std::copy(m.begin(), m.end(), w.begin());
        sources.push_back(std::move(w));
    }
    Echelon e = base.echelon();
    e.set_exec(exec);
    auto series = monomial_series_table(*ring, extra, exec);
    std::vector<SparseVec> vs(extra.size());
    std::vector<int> ids(extra.size());
    for (std::size_t k = 0; k < extra.size(); ++k) {
        vs[k] = series_vector(series[k]);
        ids[k] = static_cast<int>(sources.size() + k);
    }
    e.insert_batch(vs, ids);
    sources.insert(sources.end(), extra.begin(), extra.end());
    return StaircaseBasis(std::move(ring), std::move(sources), std::move(e));
}

ValueSemigroup semigroup_from_staircase(const StaircaseBasis& sb)
{
    ValueSemigroup vs;
    vs.precision = sb.precision();
    vs.attained = sb.pivots();
    vs.conductor = conductor(vs);
    for (int v = 0; v < vs.conductor; ++v)
        if (!std::binary_search(vs.attained.begin(), vs.attained.end(), v)) vs.gaps.push_back(v);
    return vs;
}

SemigroupResult value_semigroup(RingPtr ring, Exec exec)
{
    auto order = staircase_order(*ring, ring->nvars(), {});
    auto sb = std::make_shared<const StaircaseBasis>(build_staircase(ring, order, exec));
    return {semigroup_from_staircase(*sb), sb};
}

SemigroupResult value_semigroup(const Branch& b, Exec exec)
{
    return value_semigroup(Ring::of_branch(b), exec);
}

int conductor(const ValueSemigroup& vs)
{
    // least c with [c, B] attained
    int c = vs.precision + 1;
    for (auto it = vs.attained.rbegin(); it != vs.attained.rend() && *it == c - 1; ++it) c = *it;
    if (c > vs.precision) throw PrecisionError("precision too small to certify the conductor");
    return c;
}

std::vector<int> extension_gaps(const ValueSemigroup& vs, int a1)
{
    std::vector<int> b;
    for (int v = std::max(0, vs.conductor - a1); v < vs.conductor; ++v)
        if (!vs.contains(v)) b.push_back(v);
    return b;
}

Division divide_by_staircase(const TruncatedSeries& sigma, const StaircaseBasis& sb, int floor)
{
    const int B = sb.precision();
    if (sigma.precision() != B) throw PrecisionError("divide_by_staircase: precision mismatch");
    if (sigma.order() < floor) throw DivisionError("series order is below the division floor");
    std::vector<Rational> r = sigma.dense();
    SparseVec combo;
    const auto& e = sb.echelon();
    Rational tmp;
    for (int p = 0; p <= B; ++p) {
        if (branchtor::is_zero(r[p])) continue;
        if (!e.is_pivot(p))
            throw DivisionError("residual has order " + std::to_string(p) + ", which is not attained");
        const auto& row = e.rows()[e.row_of(p)];
        Rational c = r[p];
        for (auto& [q, v] : row.entries) {
            tmp = c * v;
            r[q] -= tmp;
        }
        sparse_axpy(combo, -c, row.combo);
    }
    Division d;
    d.expression = sb.combination(combo);
    d.residual = TruncatedSeries::from_dense(r, B);
    return d;
}

}  // namespace branchtor
