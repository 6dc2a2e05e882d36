#ifndef BRANCHTOR_SEMIGROUP_HPP
#define BRANCHTOR_SEMIGROUP_HPP

#include "branchtor/branch.hpp"
#include "branchtor/echelon.hpp"
#include "branchtor/polynomial.hpp"
#include "branchtor/ring.hpp"

#include <memory>
#include <vector>

namespace branchtor {

struct ValueSemigroup {
    int precision = 0;
    std::vector<int> attained;  // sorted, within [0, precision]
    int conductor = 0;
    std::vector<int> gaps;      // [0, conductor) minus attained
    bool contains(int v) const;
};

// One row per attained valuation, kept fully reduced, with its expression in
// the ring generators tracked over the inserted monomials.
class StaircaseBasis
{
public:
    StaircaseBasis() = default;
    StaircaseBasis(RingPtr ring, std::vector<Monomial> sources, Echelon echelon);

    const Ring& ring() const { return *ring_; }
    RingPtr ring_ptr() const { return ring_; }
    int precision() const { return ring_->precision(); }
    const Echelon& echelon() const { return echelon_; }
    const std::vector<Monomial>& sources() const { return sources_; }
    bool attained(int v) const;
    std::vector<int> pivots() const;
    Polynomial representative(int v) const;
    TruncatedSeries representative_series(int v) const;
    Polynomial combination(const SparseVec& combo) const;

private:
    RingPtr ring_;
    std::vector<Monomial> sources_;
    Echelon echelon_;
};

// Insertion order: nonlinear monomials first (grlex), then the variables, then
// `extra_last` in the order given.
std::vector<Monomial> staircase_order(const Ring& ring, std::size_t linear_vars, const std::vector<Monomial>& extra_last);

StaircaseBasis build_staircase(RingPtr ring, const std::vector<Monomial>& order, Exec exec = Exec::serial);

// Continue a finished staircase inside a larger ring (old variables first).
StaircaseBasis extend_staircase(const StaircaseBasis& base, RingPtr ring, const std::vector<Monomial>& extra,
                                Exec exec = Exec::serial);

ValueSemigroup semigroup_from_staircase(const StaircaseBasis& sb);

struct SemigroupResult {
    ValueSemigroup semigroup;
    std::shared_ptr<const StaircaseBasis> staircase;
};

SemigroupResult value_semigroup(const Branch& b, Exec exec = Exec::serial);
SemigroupResult value_semigroup(RingPtr ring, Exec exec = Exec::serial);

int conductor(const ValueSemigroup& vs);
std::vector<int> extension_gaps(const ValueSemigroup& vs, int a1);

struct DivisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Division {
    Polynomial expression;
    TruncatedSeries residual;
};

// Greedy elimination of sigma against the staircase rows.
Division divide_by_staircase(const TruncatedSeries& sigma, const StaircaseBasis& sb, int floor = 0);

}  // namespace branchtor

#endif
