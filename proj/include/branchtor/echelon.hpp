#ifndef BRANCHTOR_ECHELON_HPP
#define BRANCHTOR_ECHELON_HPP

#include "branchtor/rational.hpp"
#include "branchtor/series.hpp"

#include <cstddef>
#include <vector>

namespace branchtor {

enum class Exec { serial, parallel };

// Sparse vector: sorted (index, value) pairs without zeros.
using SparseVec = std::vector<std::pair<int, Rational>>;

// a <- a - f*b
void sparse_axpy(SparseVec& a, const Rational& f, const SparseVec& b);
SparseVec sparse_scaled(const SparseVec& a, const Rational& f);
Rational sparse_get(const SparseVec& a, int index);
SparseVec to_sparse(const std::vector<Rational>& dense);

// Incremental reduced row echelon form over positions [0, length), pivoting on the
// lowest nonzero position. Rows are kept fully reduced at every step, so each row
// is zero at every other pivot position. With tracking on, each row also records
// its expression as a combination of the inserted source ids.
class Echelon
{
public:
    struct Row {
        int pivot = -1;
        SparseVec entries;  // includes the leading 1
        SparseVec combo;    // over source ids, only when tracking
    };

    struct Outcome {
        bool new_pivot = false;
        int pivot = -1;
        SparseVec kernel;  // dependent vector: source - combination, when requested
    };

    Echelon() = default;
    Echelon(int length, bool track, Exec exec = Exec::serial);

    int length() const { return length_; }
    bool tracking() const { return track_; }
    std::size_t rank() const { return rows_.size(); }
    const std::vector<Row>& rows() const { return rows_; }
    int row_of(int position) const { return pivot_row_[position]; }
    bool is_pivot(int position) const { return pivot_row_[position] >= 0; }
    void set_exec(Exec e) { exec_ = e; }

    // Reduce a dense vector in place; returns the multipliers applied per row index.
    std::vector<std::pair<int, Rational>> reduce(std::vector<Rational>& v) const;
    bool in_span(std::vector<Rational> v) const;

    Outcome insert(std::vector<Rational> v, int source_id, bool want_kernel = false);
    Outcome insert(const SparseVec& v, int source_id, bool want_kernel = false);

    // Same result as inserting one by one. The parallel policy first reduces the
    // batch against the current rows concurrently (that reduction is canonical).
    std::vector<Outcome> insert_batch(const std::vector<SparseVec>& vs, const std::vector<int>& ids,
                                      bool want_kernel = false);

private:
    SparseVec combine(int source_id, const std::vector<std::pair<int, Rational>>& mult) const;
    Outcome insert_reduced(std::vector<Rational>& v, SparseVec combo, bool want_kernel);

    int length_ = 0;
    bool track_ = false;
    Exec exec_ = Exec::serial;
    std::vector<Row> rows_;
    std::vector<int> pivot_row_;
};

}  // namespace branchtor

#endif
