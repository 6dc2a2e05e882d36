#ifndef BRANCHTOR_KERNELS_HPP
#define BRANCHTOR_KERNELS_HPP

#include "branchtor/echelon.hpp"
#include "branchtor/polynomial.hpp"
#include "branchtor/ring.hpp"

#include <vector>

namespace branchtor {

// Images of many monomials under the ring map. The parallel policy walks the
// monomials level by level in total degree so every parent is ready before
// its children; the serial policy is the reference used in tests.
std::vector<TruncatedSeries> monomial_series_table(const Ring& ring, const std::vector<Monomial>& monomials,
                                                   Exec exec = Exec::serial);

// Residuals of vs after reduction against a fixed echelon form.
std::vector<SparseVec> reduce_batch(const Echelon& e, const std::vector<SparseVec>& vs, Exec exec = Exec::serial);

SparseVec series_vector(const TruncatedSeries& f);

}  // namespace branchtor

#endif
