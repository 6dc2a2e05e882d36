#include "branchtor/echelon.hpp"

#include <algorithm>

namespace branchtor {

void sparse_axpy(SparseVec& a, const Rational& f, const SparseVec& b)
{
    if (branchtor::is_zero(f) || b.empty()) return;
    SparseVec out;
    out.reserve(a.size() + b.size());
    auto x = a.begin();
    auto y = b.begin();
    Rational tmp;
    while (x != a.end() || y != b.end()) {
        if (y == b.end() || (x != a.end() && x->first < y->first)) {
            out.push_back(std::move(*x++));
        } else if (x == a.end() || y->first < x->first) {
            out.emplace_back(y->first, -f * y->second);
            ++y;
        } else {
            tmp = f * y->second;
            x->second -= tmp;
            if (!branchtor::is_zero(x->second)) out.push_back(std::move(*x));
            ++x, ++y;
        }
    }
    a = std::move(out);
}

SparseVec sparse_scaled(const SparseVec& a, const Rational& f)
{
    SparseVec out;
    if (branchtor::is_zero(f)) return out;
    out.reserve(a.size());
    for (auto& [i, c] : a) out.emplace_back(i, c * f);
    return out;
}

Rational sparse_get(const SparseVec& a, int index)
{
    auto it = std::lower_bound(a.begin(), a.end(), index, [](const auto& t, int i) { return t.first < i; });
    return (it != a.end() && it->first == index) ? it->second : Rational(0);
}

SparseVec to_sparse(const std::vector<Rational>& dense)
{
    SparseVec out;
    for (int i = 0; i < static_cast<int>(dense.size()); ++i)
        if (!branchtor::is_zero(dense[i])) out.emplace_back(i, dense[i]);
    return out;
}

namespace {

std::vector<Rational> densify(const SparseVec& v, int length)
{
    std::vector<Rational> d(length);
    for (auto& [i, c] : v)
        if (i < length) d[i] = c;
    return d;
}

}  // namespace

Echelon::Echelon(int length, bool track, Exec exec)
    : length_(length), track_(track), exec_(exec), pivot_row_(length, -1)
{
}

std::vector<std::pair<int, Rational>> Echelon::reduce(std::vector<Rational>& v) const
{
    std::vector<std::pair<int, Rational>> mult;
    Rational tmp;
    for (int p = 0; p < length_; ++p) {
        if (branchtor::is_zero(v[p])) continue;
        int r = pivot_row_[p];
        if (r < 0) continue;
        Rational c = v[p];
        for (auto& [q, e] : rows_[r].entries) {
            tmp = c * e;
            v[q] -= tmp;
        }
        mult.emplace_back(r, std::move(c));
    }
    return mult;
}

bool Echelon::in_span(std::vector<Rational> v) const
{
    reduce(v);
    return std::all_of(v.begin(), v.end(), [](const Rational& c) { return branchtor::is_zero(c); });
}

Echelon::Outcome Echelon::insert(const SparseVec& v, int source_id, bool want_kernel)
{
    return insert(densify(v, length_), source_id, want_kernel);
}

SparseVec Echelon::combine(int source_id, const std::vector<std::pair<int, Rational>>& mult) const
{
    SparseVec combo{{source_id, Rational(1)}};
    for (auto& [r, c] : mult) sparse_axpy(combo, c, rows_[r].combo);
    return combo;
}

Echelon::Outcome Echelon::insert(std::vector<Rational> v, int source_id, bool want_kernel)
{
    auto mult = reduce(v);
    bool nonzero = std::any_of(v.begin(), v.end(), [](const Rational& c) { return !branchtor::is_zero(c); });
    SparseVec combo;
    if (track_ && (nonzero || want_kernel)) combo = combine(source_id, mult);
    return insert_reduced(v, std::move(combo), want_kernel);
}

Echelon::Outcome Echelon::insert_reduced(std::vector<Rational>& v, SparseVec combo, bool want_kernel)
{
    Outcome out;
    int lead = -1;
    for (int p = 0; p < length_; ++p)
        if (!branchtor::is_zero(v[p])) {
            lead = p;
            break;
        }
    if (lead < 0) {
        if (want_kernel && track_) out.kernel = std::move(combo);
        return out;
    }
    Row row;
    row.pivot = lead;
    Rational inv = 1 / v[lead];
    for (int q = lead; q < length_; ++q)
        if (!branchtor::is_zero(v[q])) row.entries.emplace_back(q, v[q] * inv);
    if (track_) row.combo = sparse_scaled(combo, inv);

    // keep the form reduced: clear the new pivot column from the older rows
    const int nrows = static_cast<int>(rows_.size());
#pragma omp parallel for schedule(dynamic, 4) if (exec_ == Exec::parallel && nrows > 64)
    for (int r = 0; r < nrows; ++r) {
        Row& old = rows_[r];
        if (old.pivot > lead) continue;
        Rational f = sparse_get(old.entries, lead);
        if (branchtor::is_zero(f)) continue;
        sparse_axpy(old.entries, f, row.entries);
        if (track_) sparse_axpy(old.combo, f, row.combo);
    }
    pivot_row_[lead] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(row));
    out.new_pivot = true;
    out.pivot = lead;
    return out;
}

std::vector<Echelon::Outcome> Echelon::insert_batch(const std::vector<SparseVec>& vs, const std::vector<int>& ids,
                                                    bool want_kernel)
{
    std::vector<Outcome> outcomes(vs.size());
    if (exec_ == Exec::serial) {
        for (std::size_t k = 0; k < vs.size(); ++k) outcomes[k] = insert(vs[k], ids[k], want_kernel);
        return outcomes;
    }
    const std::size_t chunk = 256;
    for (std::size_t start = 0; start < vs.size(); start += chunk) {
        std::size_t stop = std::min(vs.size(), start + chunk);
        std::vector<std::vector<Rational>> dense(stop - start);
        std::vector<SparseVec> combos(stop - start);
        std::vector<char> live(stop - start, 0);
        // reduction against a fixed set of rows is canonical, so doing it
        // concurrently up front changes nothing downstream
#pragma omp parallel for schedule(dynamic, 4)
        for (std::size_t k = start; k < stop; ++k) {
            auto& d = dense[k - start];
            d = densify(vs[k], length_);
            auto mult = reduce(d);
            bool nonzero = std::any_of(d.begin(), d.end(), [](const Rational& c) { return !branchtor::is_zero(c); });
            live[k - start] = nonzero;
            if (track_ && (nonzero || want_kernel)) combos[k - start] = combine(ids[k], mult);
        }
        for (std::size_t k = start; k < stop; ++k) {
            auto& d = dense[k - start];
            auto& combo = combos[k - start];
            if (live[k - start]) {
                auto mult = reduce(d);
                if (track_)
                    for (auto& [r, c] : mult) sparse_axpy(combo, c, rows_[r].combo);
            }
            outcomes[k] = insert_reduced(d, std::move(combo), want_kernel);
        }
    }
    return outcomes;
}

}  // namespace branchtor
