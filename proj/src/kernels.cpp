#include "branchtor/kernels.hpp"

#include <algorithm>
#include <map>

namespace branchtor {

std::vector<TruncatedSeries> monomial_series_table(const Ring& ring, const std::vector<Monomial>& monomials, Exec exec)
{
    std::vector<TruncatedSeries> out(monomials.size());
    if (exec == Exec::serial) {
        for (std::size_t k = 0; k < monomials.size(); ++k) out[k] = ring.monomial_series(monomials[k]);
        return out;
    }
    std::map<int, std::vector<std::size_t>> levels;
    for (std::size_t k = 0; k < monomials.size(); ++k) levels[total_degree(monomials[k])].push_back(k);
    for (auto& [degree, idx] : levels) {
        const long count = static_cast<long>(idx.size());
#pragma omp parallel for schedule(dynamic, 8)
        for (long q = 0; q < count; ++q) out[idx[q]] = ring.monomial_series(monomials[idx[q]]);
    }
    return out;
}

std::vector<SparseVec> reduce_batch(const Echelon& e, const std::vector<SparseVec>& vs, Exec exec)
{
    std::vector<SparseVec> out(vs.size());
    const long count = static_cast<long>(vs.size());
#pragma omp parallel for schedule(dynamic, 4) if (exec == Exec::parallel)
    for (long k = 0; k < count; ++k) {
        std::vector<Rational> d(e.length());
        for (auto& [i, c] : vs[k])
            if (i < e.length()) d[i] = c;
        e.reduce(d);
        out[k] = to_sparse(d);
    }
    return out;
}

SparseVec series_vector(const TruncatedSeries& f)
{
    return SparseVec(f.terms().begin(), f.terms().end());
}

}  // namespace branchtor
